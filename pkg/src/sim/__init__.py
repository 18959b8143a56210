"""Ground-truth simulation and measurement synthesis"""
