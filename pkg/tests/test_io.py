import numpy as np

from mspec.io import fmt, read_csv, read_spectrum, write_kernel_csv, write_spectrum
from mspec.kernels import build_chain_kernel_iid, build_complete_kernel
from mspec.randlaw import SeededRng, Uniform
from mspec.spectra import kernel_spectrum


def test_fmt_is_round_trip_exact():
    for x in (1 / 3, np.pi, 1e-300, -2.5e17):
        assert float(fmt(x)) == x
    assert fmt(3) == "3" and fmt(np.int64(4)) == "4"


def test_spectrum_round_trip(tmp_path):
    spec = kernel_spectrum(build_chain_kernel_iid(40, Uniform(0, 1), SeededRng(2)))
    back = read_spectrum(write_spectrum(tmp_path / "s.txt", spec))
    assert np.array_equal(back.values, spec.values)


def test_kernel_export(tmp_path):
    dense = build_complete_kernel(4, Uniform(0, 2), SeededRng(1))
    header, rows = read_csv(write_kernel_csv(tmp_path / "d.csv", dense))
    assert header == ["i", "j", "K"] and len(rows) == 16
    i, j, v = rows[5]
    assert float(v) == dense.K[int(i) - 1, int(j) - 1]
    chain = build_chain_kernel_iid(6, Uniform(0, 1), SeededRng(1))
    header, rows = read_csv(write_kernel_csv(tmp_path / "c.csv", chain))
    assert header == ["i", "c", "a", "b"] and [r[0] for r in rows] == ["1", "2", "3", "4", "5", "6"]
