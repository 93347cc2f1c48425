# Mutation operators producing type-preserving candidate patches
