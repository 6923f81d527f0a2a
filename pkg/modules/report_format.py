"""
Report Format Module
Provides JSON and human-readable renderings of closure reports and toric data.
"""

import json
import logging
from typing import Any, Dict, List, Optional

from modules.closure import ClosureReport
from modules.exact import format_rational
from modules.mgroup import SymbolicScalar
from modules.multipoly import GREVLEX, Ideal, OrderTag, format_poly, rename_variables
from modules.spectral import matrix_to_json
from modules.toric import ToricData

logger = logging.getLogger(__name__)

ORIGINAL = "original"
JORDAN = "jordan"
COORDINATES = (ORIGINAL, JORDAN)

JSON_OUTPUT = "json"
TEXT_OUTPUT = "text"
OUTPUTS = (JSON_OUTPUT, TEXT_OUTPUT)

# entries of [[x, w], [z, y]], row-major
TWO_BY_TWO_LETTERS = ("x", "w", "z", "y")


class ReportFormatter:
    """Renders reports; the polynomial order and label are fixed per instance"""

    def __init__(self, order: OrderTag = GREVLEX, coords: str = ORIGINAL,
                 ideal_label: str = "ideal"):
        self.order = order
        self.coords = coords
        self.ideal_label = ideal_label

    def ideal_strings(self, ideal: Ideal) -> List[str]:
        return [format_poly(g) for g in ideal.groebner_basis(self.order)]

    def _report_ideal(self, report: ClosureReport) -> Ideal:
        return report.jordan_ideal if self.coords == JORDAN else report.ideal

    def toric_to_json(self, toric: Optional[ToricData]) -> Optional[Dict[str, Any]]:
        if toric is None:
            return None
        return {
            "points": [list(p) for p in toric.points],
            "dimension": toric.dimension,
            "kernel": toric.kernel.to_json(),
            "ideal": self.ideal_strings(toric.ideal),
            "degree": toric.degree,
        }

    def report_to_json(self, report: ClosureReport) -> Dict[str, Any]:
        components = None
        if report.component_ideals is not None and self.coords == ORIGINAL:
            components = [self.ideal_strings(c) for c in report.component_ideals]
        return {
            "mode": report.mode,
            "n": report.n,
            "nu": report.nu,
            "rank": report.rank_G,
            "torsion": report.torsion_order,
            "dimension": report.dimension,
            "components": report.num_components,
            "has_zero_eigenvalue": report.has_zero_eigenvalue,
            "diagonalizable_part": report.diagonalizable_part,
            "coords": self.coords,
            "isolated_points": [matrix_to_json(p)["entries"] for p in report.isolated_points],
            "ideal": self.ideal_strings(self._report_ideal(report)),
            "component_ideals": components,
            "relation_lattice": report.relation_lattice.to_json() if report.relation_lattice else None,
            "toric": self.toric_to_json(report.toric),
        }

    def _text_polys(self, ideal: Ideal, n: int) -> List[str]:
        basis = ideal.groebner_basis(self.order)
        if n == 2:
            basis = [rename_variables(g, TWO_BY_TWO_LETTERS) for g in basis]
        return [format_poly(g) for g in basis]

    def report_to_text(self, report: ClosureReport) -> str:
        lines = [f"mode: {report.mode}"]
        if report.blocks:
            blocks = ", ".join(f"({format_rational(b.eigenvalue)}, {b.size})" for b in report.blocks)
            lines.append(f"jordan blocks: {blocks}")
        lines += [
            f"nu: {report.nu}",
            f"rank: {report.rank_G}",
            f"torsion: {report.torsion_order}",
            f"dimension: {report.dimension}",
            f"components: {report.num_components}",
            f"isolated points: {len(report.isolated_points)}",
        ]
        for p in report.isolated_points:
            lines.append(f"  {matrix_to_json(p)['entries']}")

        if report.n == 2:
            lines.append("coordinates: [[x, w], [z, y]]")
        lines.append(f"{self.ideal_label} ({self.coords} coordinates, {self.order}):")
        lines += [f"  {p}" for p in self._text_polys(self._report_ideal(report), report.n)]

        if report.toric is not None and report.toric.degree is not None:
            lines.append(f"identity component degree: {report.toric.degree}")
        return "\n".join(lines)

    def toric_to_text(self, toric: ToricData, matrix: List[SymbolicScalar]) -> str:
        lines = [
            f"diagonal: {', '.join(str(a) for a in matrix)}",
            f"dimension: {toric.dimension}",
            f"kernel: {toric.kernel.to_json()}",
        ]
        if toric.degree is not None:
            lines.append(f"degree: {toric.degree}")
        lines.append("ideal:")
        lines += [f"  {p}" for p in self.ideal_strings(toric.ideal)]
        return "\n".join(lines)


def dumps(data: Any) -> str:
    """Deterministic JSON"""
    return json.dumps(data, indent=2, sort_keys=False)
