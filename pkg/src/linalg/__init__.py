"""Dense matrix kernels for the filters"""
