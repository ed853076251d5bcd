"""The f-indexed family of phi-matrices, shared by the shape and kisin modules."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import WitnessMismatch
from .series import SeriesMatrix

WITNESS_KEYS = ("T", "X", "Lambda1", "Z1", "Lambda0", "S")


@dataclass(frozen=True)
class PhiFamily:
    """F_i is the matrix of phi from index i-1 to i, indices cyclic mod f.

    witnesses, when present, store per-index factors {T, X, Lambda1, Z1,
    Lambda0, S} with F_i = T_i X_i Lambda1_i Z1_i Lambda0_i S_i and
    S_i = phi(T_{i-1}^{-1}).
    """

    matrices: tuple
    witnesses: dict | None = None
    meta: dict = dc_field(default_factory=dict)

    @property
    def f(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].dim

    def check_witnesses(self) -> None:
        """Raise WitnessMismatch unless the stored factorization reproduces F."""
        if self.witnesses is None:
            raise WitnessMismatch("family carries no witnesses")
        wit = self.witnesses
        for key in WITNESS_KEYS:
            if key not in wit or len(wit[key]) != self.f:
                raise WitnessMismatch(f"missing or ragged witness sequence {key!r}")
        for i, fmat in enumerate(self.matrices):
            prod = (
                wit["T"][i]
                * wit["X"][i]
                * wit["Lambda1"][i]
                * wit["Z1"][i]
                * wit["Lambda0"][i]
                * wit["S"][i]
            )
            if prod != fmat.truncate(prod.precision):
                raise WitnessMismatch(f"witness product differs from F at index {i}")
            s_expected = wit["T"][i - 1].invert().phi()
            if wit["S"][i] != s_expected.truncate(wit["S"][i].precision):
                raise WitnessMismatch(f"S_{i} != phi(T_{i - 1}^-1)")


def phi_conjugate(t_list, matrices) -> list[SeriesMatrix]:
    """The family T_i * F_i * phi(T_{i-1}^{-1})."""
    f = len(matrices)
    return [
        t_list[i] * matrices[i] * t_list[(i - 1) % f].invert().phi()
        for i in range(f)
    ]
