"""Weight hypergraphs, toric obstructions and cohomology of flag hypersurfaces."""

__version__ = "0.1.0"
