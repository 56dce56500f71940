"""Gonality of multigraphs: spectral bounds, harmonic morphisms to trees and chip-firing."""

__version__ = "0.1.0"
