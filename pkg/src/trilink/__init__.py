"""Links formed by edges of triangulated 3-spheres: realization, diagrams and crossing-number bounds."""

__version__ = "0.1.0"
