"""
Test package for qktdiscord.
"""
