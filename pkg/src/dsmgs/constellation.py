"""Square M-QAM constellations seen through their real PAM alphabet.

After the real-valued decomposition of the MIMO model, every transmitted
coordinate lives on the PAM levels (..., -3, -1, +1, +3, ...).  This module
owns those levels, the Gray bit mapping used for BER accounting, the hard
slicer, and the index-distance neighborhoods used by the neighborhood-limited
Gibbs detector.
"""

from dataclasses import dataclass

import numpy as np

SUPPORTED_ORDERS = (4, 16, 64, 256)


@dataclass(frozen=True)
class PamAlphabet:
    """The real PAM levels underlying a square M-QAM constellation.

    Attributes
    ----------
    modulation_order : int
        QAM order M; the per-dimension alphabet has sqrt(M) levels.
    levels : np.ndarray
        Ascending odd integers, symmetric about zero, spaced by 2.
    per_dimension_energy : float
        Mean squared level, equal to (M - 1) / 3.
    """

    modulation_order: int
    levels: np.ndarray
    per_dimension_energy: float

    @property
    def size(self) -> int:
        return self.levels.shape[0]

    @property
    def bits_per_symbol(self) -> int:
        """Bits carried by one PAM level, log2(sqrt(M))."""
        return self.size.bit_length() - 1

    def index_of(self, level) -> int:
        """Position of `level` in the ascending level list."""
        idx = (int(level) + self.size - 1) // 2
        if not (0 <= idx < self.size) or self.levels[idx] != level:
            raise ValueError(f"{level!r} is not a level of the {self.modulation_order}-QAM alphabet")
        return idx


def build_alphabet(modulation_order: int) -> PamAlphabet:
    """Build the PAM alphabet for a square M-QAM constellation.

    Parameters
    ----------
    modulation_order : int
        One of 4, 16, 64, 256.
    """
    if modulation_order not in SUPPORTED_ORDERS:
        raise ValueError(
            f"unsupported modulation order {modulation_order!r}: expected one of {SUPPORTED_ORDERS}"
        )
    side = int(round(np.sqrt(modulation_order)))
    levels = np.arange(-(side - 1), side, 2, dtype=np.float64)
    levels.setflags(write=False)
    energy = float(np.mean(levels**2))
    return PamAlphabet(modulation_order, levels, energy)


def index_distance(a, b, alphabet: PamAlphabet) -> int:
    """Distance between two levels, counted in alphabet positions."""
    return abs(alphabet.index_of(a) - alphabet.index_of(b))


def neighborhood(center, distance: int, alphabet: PamAlphabet) -> np.ndarray:
    """Levels within `distance` alphabet positions of `center`.

    The set always contains `center` itself (its distance is zero) and is
    returned in ascending order.  Edge levels have truncated, asymmetric
    neighborhoods.
    """
    if distance < 1:
        raise ValueError(f"neighborhood distance must be >= 1, got {distance}")
    idx = alphabet.index_of(center)
    lo = max(0, idx - distance)
    hi = min(alphabet.size, idx + distance + 1)
    return alphabet.levels[lo:hi]


def slice_to_levels(values, alphabet: PamAlphabet):
    """Map real values to the nearest PAM level (hard decision).

    Exact midpoints between two levels round toward the level closer to zero;
    the symmetric midpoint at 0 takes the negative level.  Values outside the
    constellation clamp to the extreme levels.
    """
    x = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot slice non-finite values")
    size = alphabet.size
    pos = (x + (size - 1)) / 2.0
    lo = np.clip(np.floor(pos), 0, size - 1).astype(np.intp)
    hi = np.clip(np.ceil(pos), 0, size - 1).astype(np.intp)
    lev_lo = alphabet.levels[lo]
    lev_hi = alphabet.levels[hi]
    d_lo = np.abs(x - lev_lo)
    d_hi = np.abs(x - lev_hi)
    take_hi = (d_hi < d_lo) | ((d_hi == d_lo) & (np.abs(lev_hi) < np.abs(lev_lo)))
    out = np.where(take_hi, lev_hi, lev_lo)
    if np.isscalar(values) or np.ndim(values) == 0:
        return float(out)
    return out


def level_indices(levels, alphabet: PamAlphabet) -> np.ndarray:
    """Vectorized positions of alphabet levels (no membership check)."""
    arr = np.asarray(levels)
    return ((arr + alphabet.size - 1) // 2).astype(np.intp)


def levels_to_bits(levels, alphabet: PamAlphabet) -> np.ndarray:
    """Gray-demap PAM levels to bits, most significant bit first.

    Output shape is the input shape with a trailing axis of
    ``alphabet.bits_per_symbol``.
    """
    idx = level_indices(levels, alphabet)
    if np.any(idx < 0) or np.any(idx >= alphabet.size) or np.any(
        np.asarray(levels) != alphabet.levels[np.clip(idx, 0, alphabet.size - 1)]
    ):
        raise ValueError("input contains values outside the PAM alphabet")
    gray = idx ^ (idx >> 1)
    nbits = alphabet.bits_per_symbol
    shifts = np.arange(nbits - 1, -1, -1)
    return ((gray[..., None] >> shifts) & 1).astype(np.uint8)


def bits_to_levels(bits, alphabet: PamAlphabet) -> np.ndarray:
    """Gray-map bit groups back to PAM levels; inverse of `levels_to_bits`."""
    arr = np.asarray(bits)
    nbits = alphabet.bits_per_symbol
    if arr.shape[-1:] != (nbits,):
        raise ValueError(f"expected bit groups of width {nbits}, got trailing shape {arr.shape[-1:]}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("bits must be 0 or 1")
    shifts = np.arange(nbits - 1, -1, -1)
    gray = (arr.astype(np.intp) << shifts).sum(axis=-1)
    idx = gray.copy()
    shift = 1
    while shift < nbits:  # inverse of the binary-reflected Gray code
        idx ^= idx >> shift
        shift *= 2
    return alphabet.levels[idx]


def bit_distance_table(alphabet: PamAlphabet) -> np.ndarray:
    """Table of Gray-bit Hamming distances between level indices.

    ``table[i, j]`` is the number of differing bits between the bit patterns
    of levels i and j; used to count bit errors without demapping each trial.
    """
    idx = np.arange(alphabet.size)
    gray = idx ^ (idx >> 1)
    diff = gray[:, None] ^ gray[None, :]
    table = np.zeros_like(diff)
    while np.any(diff):
        table += diff & 1
        diff >>= 1
    return table
