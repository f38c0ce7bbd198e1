"""
The frame language: declarations, textual format and execution
"""
