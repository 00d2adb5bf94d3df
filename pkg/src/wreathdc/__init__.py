"""Degree of commutativity experiments for wreath products L wr Z."""

__version__ = "0.1.0"
