"""Continuous-discrete EKF variants"""
