"""Fox n-colorings of link diagrams and an exact checker for the palette bound 2**(l-1) >= n."""
from .bound import BoundCertificate, RowType, check_det_bound_claim, classify_row, verify
from .coloring import (
    Coloring,
    ColoringClass,
    EnumerationCapExceeded,
    classify,
    coloring_matrix,
    determinant,
    enumerate_colorings,
    min_colors_on_diagram,
    theorem_lower_bound,
)
from .diagram import LinkDiagram, PDCode, build_diagram, load_diagram, parse_pd
from .exactlin import IntMatrix, det, rank, smith_normal_form, solve_mod_n

__version__ = "0.1.0"
