# tests package: pytest suites and golden data
