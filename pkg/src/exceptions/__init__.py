"""Exception hierarchy and CLI handlers"""
