# Tests package for the Multi-Agent Task Solver

