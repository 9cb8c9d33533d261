"""Exact SU(2)-character computations and Veech-group cocycle dynamics for
the two exceptional square-tiled surfaces (genus 3 EW and genus 4 Platypus).
"""

__version__ = "0.1.0"
