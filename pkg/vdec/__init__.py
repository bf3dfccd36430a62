"""
vdec

Vertex-distinguishing edge colorings with guaranteed palette bounds.
"""

__version__ = "0.1.0"
