"""Monte Carlo experiment harness"""
