"""Density of circle packings with two and three radii.

Triangle-local densities and Florian's bound, the perturbed compact packing
families, certified critical radius ratios, explicit torus constructions
with verification, and wallpaper group classification.
"""
from .errors import (BracketError, CertificateError, ConsistencyError, DomainError,
                     PackingFormatError)
from .f53_family import f53_density_closed, solve_p
from .ft_family import ft_density_closed
from .packing import (Disk, TorusPacking, build_f53, build_ft, build_hexagonal,
                      contact_graph, verify_packing)
from .roots import critical_ratios
from .symmetry import classify, find_symmetries, orbifold_ratio
from .triangle import (HEX_DENSITY, AngleTriple, RadiusTriple, density_angles,
                       density_radii, florian_bound)

__all__ = [
    "AngleTriple", "BracketError", "CertificateError", "ConsistencyError", "Disk",
    "DomainError", "HEX_DENSITY", "PackingFormatError", "RadiusTriple", "TorusPacking",
    "build_f53", "build_ft", "build_hexagonal", "classify", "contact_graph",
    "critical_ratios", "density_angles", "density_radii", "f53_density_closed",
    "find_symmetries", "florian_bound", "ft_density_closed", "orbifold_ratio",
    "solve_p", "verify_packing",
]
