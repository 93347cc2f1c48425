# Patch validation, ranking and mutation scoring
