import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from genuslab.catalog import ClassSpec, GenusFunction, member
from genuslab.graph import CapExceeded, Graph
from genuslab.samplers import (
    LAMBDA_PLANAR,
    RHO_PLANAR,
    BPModel,
    Binomial,
    Poisson,
    SamplerError,
    Seed,
    UniformSampler,
    binomial,
    bp_planar,
    bp_planar_batch,
    exact_pmf,
    gnp,
    poisson,
    uniform_from_class,
)

PLANAR = ClassSpec.planar()


@pytest.fixture(scope="module")
def model():
    return BPModel.build()


def test_uniform_n3_chi_square():
    s = UniformSampler(3, PLANAR)
    codes = s.draw_codes(100_000, Seed(11))
    counts = np.bincount(codes, minlength=8)
    assert stats.chisquare(counts).pvalue > 0.001
    tv = 0.5 * np.abs(counts / counts.sum() - 1 / 8).sum()
    assert tv < 0.02


def test_uniform_all_graphs_at_five():
    s = UniformSampler(5, ClassSpec("OE", "plain", True, GenusFunction.const(2)))
    assert len(s.codes) == 1024
    edges = np.array([bin(int(c)).count("1") for c in s.draw_codes(20_000, Seed(3))])
    assert abs(edges.mean() - 5) < 4 * math.sqrt(2.5 / 20_000)


def test_uniform_single_vertex():
    assert uniform_from_class(1, PLANAR, Seed(0)) == Graph.empty(1)


def test_uniform_determinism():
    a = [uniform_from_class(5, PLANAR, Seed(9).split(i)) for i in range(20)]
    b = [uniform_from_class(5, PLANAR, Seed(9).split(i)) for i in range(20)]
    assert a == b
    assert len(set(a)) > 1
    s = UniformSampler(5, PLANAR)
    assert s.draw_codes(5000, Seed(1)).tolist() == s.draw_codes(5000, Seed(1)).tolist()
    assert s.draw_codes(5000, Seed(1)).tolist() != s.draw_codes(5000, Seed(2)).tolist()


def test_rejection_mode():
    spec = ClassSpec("E", "plain", True, GenusFunction.const(0))
    g = uniform_from_class(8, spec, Seed(4), mode="reject")
    assert g.n == 8 and member(g, spec)
    with pytest.raises(SamplerError, match="plain closure"):
        uniform_from_class(6, spec.with_closure("hereditary"), Seed(0), mode="reject")
    with pytest.raises(SamplerError, match="acceptance rate"):
        uniform_from_class(7, spec.with_g(GenusFunction.const(0)), Seed(0), mode="reject", max_tries=0)


def test_minor_closed_sampling_stays_in_class():
    spec = ClassSpec("OE", "minor", True, GenusFunction.parse("table:0,0,0,0,2"))
    for i in range(30):
        assert member(uniform_from_class(5, spec, Seed(i)), spec)


def test_gnp_extremes_and_mean():
    assert gnp(6, 0, Seed(0)).e == 0
    assert gnp(6, 1, Seed(0)) == Graph.complete(6)
    with pytest.raises(SamplerError):
        gnp(3, 1.5, Seed(0))
    rng = Seed(5).generator()
    e = np.array([gnp(5, 0.5, rng).e for _ in range(20_000)])
    assert abs(e.mean() - 5) < 3 * math.sqrt(2.5 / 20_000)


def test_seed_validation():
    with pytest.raises(SamplerError):
        Seed(-1)
    with pytest.raises(SamplerError):
        Seed(2**64)
    assert Seed(1).split(2).split(3) == Seed(1, (2, 3))


def test_binomial_exact_pmf():
    assert exact_pmf(Binomial(2)).table == {0: Fraction(1, 4), 1: Fraction(1, 2), 2: Fraction(1, 4)}
    pmf = exact_pmf(Binomial(12, Fraction(1, 3)))
    assert sum(pmf.table.values()) == 1
    assert pmf.tail_mass == 0


def test_poisson_exact_pmf_declares_tail():
    pmf = exact_pmf(Poisson(Fraction(1), shift=1, tail=1e-15))
    assert min(pmf.table) == 1
    assert float(pmf.table[1]) == pytest.approx(math.exp(-1))
    assert pmf.tail_mass < 1e-15
    assert float(sum(pmf.table.values())) + pmf.tail_mass == pytest.approx(1, abs=1e-15)
    with pytest.raises(SamplerError):
        exact_pmf(Poisson(-1))


def test_poisson_draws():
    assert all(poisson(0, Seed(i)) == 0 for i in range(50))
    reps = 200_000
    x = np.array([poisson(1.0, Seed(7).split(i)) for i in range(reps)])
    assert abs(x.mean() - 1) < 3 / math.sqrt(reps)
    with pytest.raises(SamplerError):
        poisson(float("nan"), Seed(0))


@given(st.integers(0, 30), st.sampled_from([0.0, 0.3, 1.0]), st.integers(0, 2**32))
def test_binomial_range(k, p, s):
    x = binomial(k, p, Seed(s))
    assert 0 <= x <= k
    if p == 0:
        assert x == 0
    if p == 1:
        assert x == k


def test_bp_model_weights(model):
    assert all(w > 0 for w in model.weights)
    # the reference constant is rounded to six places
    assert model.lambda_trunc == pytest.approx(LAMBDA_PLANAR, abs=1e-6)
    assert model.tail_estimate < 1e-6
    assert model.weights[model.index_of(Graph.empty(1))] == pytest.approx(RHO_PLANAR)
    lams = [BPModel.build(cap=c).lambda_trunc for c in range(1, 8)]
    assert lams == sorted(lams)
    with pytest.raises(SamplerError):
        BPModel.build(cap=0)
    with pytest.raises(CapExceeded):
        BPModel.build(cap=8)


def test_bp_empty_probability(model):
    reps = 100_000
    x = bp_planar_batch(model, reps, Seed(2))
    empty = (x.sum(axis=1) == 0).mean()
    p = math.exp(-model.lambda_trunc)
    assert abs(empty - p) < 4 * math.sqrt(p * (1 - p) / reps)
    k1 = x[:, model.index_of(Graph.empty(1))].mean()
    assert abs(k1 - RHO_PLANAR) < 4 * math.sqrt(RHO_PLANAR / reps)


def test_bp_small_rho_is_empty():
    m = BPModel.build(rho=1e-9, cap=4)
    assert bp_planar_batch(m, 1000, Seed(0)).sum() == 0


def test_bp_single_and_batch_determinism(model):
    a = bp_planar_batch(model, 10_000, Seed(8))
    b = bp_planar_batch(model, 10_000, Seed(8))
    assert (a == b).all()
    s = bp_planar(model, Seed(1))
    assert s.graph().n == sum(k * model.graphs[i].n for i, k in enumerate(s.counts))
    assert s == bp_planar(model, Seed(1))


def test_bp_sample_graph_and_repr(model):
    counts = [0] * len(model.graphs)
    counts[model.index_of(Graph.empty(1))] = 2
    counts[model.index_of(Graph.complete(2))] = 1
    from genuslab.samplers import BPSample

    s = BPSample(tuple(counts), model)
    assert not s.is_empty
    assert (s.graph().n, s.graph().e) == (4, 1)
    assert "2x1v0e" in repr(s)
    assert BPSample((0,) * len(counts), model).is_empty
