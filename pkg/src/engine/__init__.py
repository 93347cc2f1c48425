# Command-line entry point and run configuration
