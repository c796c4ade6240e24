"""Seeded random quantum objects."""
import numpy as np


def rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def haar_unitary(d, seed=None):
    g = rng(seed)
    z = (g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_state(d, seed=None):
    g = rng(seed)
    v = g.standard_normal(d) + 1j * g.standard_normal(d)
    return v / np.linalg.norm(v)


def sparse_state(d, support, seed=None):
    """Random state with exactly ``support`` nonzero amplitudes of comparable magnitude."""
    g = rng(seed)
    idx = g.choice(d, size=support, replace=False)
    mags = g.uniform(0.5, 1.5, size=support)
    phases = np.exp(2j * np.pi * g.random(support))
    v = np.zeros(d, dtype=np.complex128)
    v[idx] = mags * phases
    return v / np.linalg.norm(v)


def random_density(d, rank=None, seed=None):
    """Wishart-style random density matrix; full rank unless ``rank`` is given."""
    g = rng(seed)
    r = d if rank is None else rank
    a = g.standard_normal((d, r)) + 1j * g.standard_normal((d, r))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_kraus(d_in, d_out, count, seed=None):
    """Kraus operators of a random channel, from a Haar isometry."""
    g = rng(seed)
    u = haar_unitary(d_out * count, g)[:, :d_in]
    return [u[i * d_out:(i + 1) * d_out, :] for i in range(count)]


def random_incoherent_unitary(d, seed=None):
    """Random permutation matrix times random diagonal phases."""
    g = rng(seed)
    perm = g.permutation(d)
    phases = np.exp(2j * np.pi * g.random(d))
    u = np.zeros((d, d), dtype=np.complex128)
    u[perm, np.arange(d)] = phases
    return u
