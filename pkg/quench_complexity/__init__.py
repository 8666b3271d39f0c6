"""
quench_complexity — Nielsen complexity of a periodic harmonic chain under sudden quenches.
"""

__version__ = "1.0.0"
