"""Adaptive ODE integration over one sampling interval"""
