# Test cases, suite execution and per-line coverage
