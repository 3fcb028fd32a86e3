# engine package: calculus, VL1 and XML operations
