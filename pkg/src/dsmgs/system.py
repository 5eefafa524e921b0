"""Channel-use generation for the uplink MIMO model.

One channel use is ``y_c = H_c s_c + eta_c`` with a flat Rayleigh channel,
uniform QAM symbols and AWGN scaled to a target average SNR.  Detection runs
on the equivalent real-valued model ``y = H s + eta`` obtained by stacking
real and imaginary parts.
"""

from dataclasses import dataclass

import numpy as np

from .constellation import PamAlphabet, build_alphabet


@dataclass(frozen=True)
class ComplexSystemDraw:
    """One complex channel use before real-valued decomposition."""

    channel: np.ndarray  # (n_rx, n_users) complex
    symbols: np.ndarray  # (n_users,) complex QAM
    noise: np.ndarray    # (n_rx,) complex
    noise_var: float     # per-receive-antenna complex noise variance
    snr_db: float


@dataclass(frozen=True)
class RealSystem:
    """Real-valued channel use: y = H s + eta with s on the PAM alphabet."""

    y: np.ndarray        # (2 n_rx,)
    H: np.ndarray        # (2 n_rx, 2 n_users)
    s: np.ndarray        # (2 n_users,) PAM levels
    noise_var: float     # complex-pair noise variance sigma^2
    n_users: int
    n_rx: int

    @property
    def loading(self) -> float:
        return self.n_users / self.n_rx


def draw_channel(n_users: int, n_rx: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an i.i.d. unit-variance complex Gaussian channel matrix.

    Real and imaginary parts are independent N(0, 1/2), so each complex entry
    has zero mean and unit variance.
    """
    if n_users < 1 or n_rx < 1:
        raise ValueError("antenna counts must be positive")
    re = rng.standard_normal((n_rx, n_users))
    im = rng.standard_normal((n_rx, n_users))
    return (re + 1j * im) * np.sqrt(0.5)


def noise_variance_for_snr(snr_db: float, n_users: int, alphabet: PamAlphabet) -> float:
    """Complex noise variance that realizes a target per-antenna average SNR.

    With all users received at equal symbol power ``E_s = 2 (M - 1) / 3``
    (the mean energy of the integer-level QAM constellation), the average SNR
    is ``K E_s / sigma^2``; invert for sigma^2.
    """
    if not np.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    if n_users < 1:
        raise ValueError("n_users must be positive")
    symbol_energy = 2.0 * alphabet.per_dimension_energy
    return n_users * symbol_energy / 10.0 ** (snr_db / 10.0)


def real_block_channel(channel_c: np.ndarray) -> np.ndarray:
    """Expand a complex channel matrix into its 2N x 2K real block form."""
    h = np.asarray(channel_c)
    if h.ndim != 2:
        raise ValueError("channel matrix must be 2-D")
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def realify(draw: ComplexSystemDraw) -> RealSystem:
    """Stack a complex channel use into the equivalent real-valued system."""
    n_rx, n_users = draw.channel.shape
    if draw.symbols.shape != (n_users,) or draw.noise.shape != (n_rx,):
        raise ValueError("inconsistent dimensions between channel, symbols and noise")
    y_c = draw.channel @ draw.symbols + draw.noise
    return RealSystem(
        y=np.concatenate([y_c.real, y_c.imag]),
        H=real_block_channel(draw.channel),
        s=np.concatenate([draw.symbols.real, draw.symbols.imag]),
        noise_var=draw.noise_var,
        n_users=n_users,
        n_rx=n_rx,
    )


def draw_complex_trial(
    n_users: int,
    n_rx: int,
    modulation_order: int,
    snr_db: float,
    rng: np.random.Generator,
) -> ComplexSystemDraw:
    """Draw channel, uniform QAM symbols and AWGN for one channel use.

    Consumption order from `rng` is channel, symbols, noise; fixed so that a
    seeded stream reproduces the trial exactly.
    """
    alphabet = build_alphabet(modulation_order)
    channel = draw_channel(n_users, n_rx, rng)
    re = alphabet.levels[rng.integers(0, alphabet.size, size=n_users)]
    im = alphabet.levels[rng.integers(0, alphabet.size, size=n_users)]
    symbols = re + 1j * im
    sigma2 = noise_variance_for_snr(snr_db, n_users, alphabet)
    # sigma^2/2 per real dimension, so ||eta||^2 over the stacked real vector
    # has mean N sigma^2.
    scale = np.sqrt(sigma2 / 2.0)
    noise = scale * (rng.standard_normal(n_rx) + 1j * rng.standard_normal(n_rx))
    return ComplexSystemDraw(channel, symbols, noise, sigma2, snr_db)


def draw_trial(
    n_users: int,
    n_rx: int,
    modulation_order: int,
    snr_db: float,
    rng: np.random.Generator,
) -> RealSystem:
    """Draw one real-valued channel use ready for detection."""
    return realify(draw_complex_trial(n_users, n_rx, modulation_order, snr_db, rng))
