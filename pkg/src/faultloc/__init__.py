# Spectrum-based fault localization
