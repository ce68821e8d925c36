import pytest

from phonospace import (
    CategoricalDist,
    CondKey,
    Phone,
    ProsodicVector,
    Regime,
    StressClass,
    TransformKind,
    TransformSpec,
    Unit,
    apply,
    drift_report,
    generic_model,
    ordinal_distance,
    score,
    train,
)
from phonospace.model import LanguageModel, ModelError, admissible_targets
from conftest import random_valid_string

S, U = StressClass.STRESSED, StressClass.UNSTRESSED


def ph(marker, **kv):
    return Phone(marker, ProsodicVector(**kv))


@pytest.fixture()
def trained(mini_alphabet, rng):
    corpus = [random_valid_string(rng, mini_alphabet, max_len=9, prosody_span=2)
              for _ in range(60)]
    return train(corpus, alpha=0.01, epsilon=0.05, alphabet=mini_alphabet)


ALL_KINDS = list(TransformKind)


class TestIdentity:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_lambda_zero(self, trained, kind):
        varied = apply(trained, Regime(rate=2.0, loud=3.0, pitch=2.0), TransformSpec(kind, 0.0))
        for key in trained.tables:
            assert varied.dist(key) is trained.dist(key)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_regime_all_ones(self, trained, kind):
        varied = apply(trained, Regime(), TransformSpec(kind, 0.7))
        for key in trained.tables:
            base, after = trained.dist(key), varied.dist(key)
            if kind is TransformKind.ASSIMILATION:
                continue  # assimilation scales by lambda alone
            assert after.entries == base.entries

    def test_lambda_validated(self):
        with pytest.raises(ValueError):
            TransformSpec(TransformKind.SYNCOPE, 1.5)

    def test_regime_validated(self):
        with pytest.raises(ValueError):
            Regime(rate=0.0)


class TestSyncope:
    def test_null_mass_doubles_then_renormalizes(self, mini_alphabet):
        support = [None] + list(mini_alphabet)
        rest = [t for t in support if t is not None]
        entries = [(None, 0.1)] + [(t, 0.9 / len(rest)) for t in rest]
        key = CondKey(Unit.RHYME, U, (rest[0],))
        model = LanguageModel(alphabet=mini_alphabet, tables={key: CategoricalDist(entries)},
                              epsilon=0.0, alpha=0.0,
                              limits=__import__("phonospace").ProsodicLimits.full())
        varied = apply(model, Regime(rate=2.0), TransformSpec(TransformKind.SYNCOPE, 1.0))
        assert varied.dist(key).prob(None) == pytest.approx(0.2 / 1.1, abs=1e-12)

    def test_only_unstressed_keys_change(self, trained):
        varied = apply(trained, Regime(rate=2.0), TransformSpec(TransformKind.SYNCOPE, 1.0))
        for key in trained.tables:
            same = varied.dist(key).entries == trained.dist(key).entries
            assert same == (key.stress is not U)

    def test_normalization_preserved(self, trained):
        varied = apply(trained, Regime(rate=3.0), TransformSpec(TransformKind.SYNCOPE, 0.8))
        for key in trained.tables:
            assert abs(sum(p for _, p in varied.dist(key).entries) - 1.0) < 1e-9


class TestEpenthesis:
    def test_joining_mass_scaled(self, mini_alphabet):
        eps = 0.1
        base = generic_model(mini_alphabet, epsilon=eps)
        mm = {mini_alphabet.symbol_of(m): m for m in mini_alphabet}
        key = CondKey(Unit.RHYME, S, (mm["i"],))
        varied = apply(base, Regime(loud=2.0), TransformSpec(TransformKind.EPENTHESIS, 1.0))
        adm = admissible_targets(mini_alphabet, key)
        excluded = [t for t in mini_alphabet if t not in adm]
        d0, d1 = base.dist(key), varied.dist(key)
        scale = sum(d1.prob(t) for t in excluded) / sum(d0.prob(t) for t in excluded)
        assert scale > 1.0
        # admissible entries shrink by the common renormalizer
        ratios = {round(d1.prob(t) / d0.prob(t), 12) for t in adm}
        assert len(ratios) == 1

    def test_untouched_without_joining_mass(self, mini_alphabet):
        base = generic_model(mini_alphabet, epsilon=0.0)
        mm = {mini_alphabet.symbol_of(m): m for m in mini_alphabet}
        key = CondKey(Unit.RHYME, S, (mm["i"],))
        varied = apply(base, Regime(loud=2.0), TransformSpec(TransformKind.EPENTHESIS, 1.0))
        assert varied.dist(key).entries == base.dist(key).entries


class TestLenition:
    def test_plosive_mass_moves_to_approximant(self, mini_alphabet, mk):
        base = generic_model(mini_alphabet, epsilon=0.05)
        mm = {mini_alphabet.symbol_of(m): m for m in mini_alphabet}
        t, r = mm["t"], mm["r"]
        key = CondKey(Unit.ONSET, U, (mm["i"],))  # intervocalic-style context
        varied = apply(base, Regime(rate=2.0), TransformSpec(TransformKind.LENITION, 1.0))
        d0, d1 = base.dist(key), varied.dist(key)
        moved = d0.prob(t) * 0.5  # lambda*(rate-1)/rate
        assert d1.prob(t) == pytest.approx(d0.prob(t) - moved, abs=1e-15)
        assert d1.prob(r) == pytest.approx(d0.prob(r) + moved, abs=1e-15)

    def test_slow_regime_is_identity(self, mini_alphabet):
        base = generic_model(mini_alphabet, epsilon=0.05)
        mm = {mini_alphabet.symbol_of(m): m for m in mini_alphabet}
        key = CondKey(Unit.ONSET, U, (mm["i"],))
        varied = apply(base, Regime(rate=0.5), TransformSpec(TransformKind.LENITION, 1.0))
        assert varied.dist(key).entries == base.dist(key).entries

    def test_consonant_context_untouched(self, mini_alphabet):
        base = generic_model(mini_alphabet, epsilon=0.05)
        mm = {mini_alphabet.symbol_of(m): m for m in mini_alphabet}
        key = CondKey(Unit.ONSET, U, (mm["n"],))
        varied = apply(base, Regime(rate=2.0), TransformSpec(TransformKind.LENITION, 1.0))
        assert varied.dist(key).entries == base.dist(key).entries


class TestAssimilation:
    def test_direction_sensitivity(self, mini_alphabet):
        base = generic_model(mini_alphabet, epsilon=0.05)
        mm = {mini_alphabet.symbol_of(m): m for m in mini_alphabet}
        n, m_, p = mm["n"], mm["m"], mm["p"]
        varied = apply(base, Regime(rate=2.0), TransformSpec(TransformKind.ASSIMILATION, 0.5))
        inward = CondKey(Unit.RHYME, U, (p,))       # conditions on the following plosive
        outward = CondKey(Unit.RHYME, S, (p,))      # conditions on the preceding phone
        d0, d1 = base.dist(inward), varied.dist(inward)
        assert d1.prob(n) == pytest.approx(d0.prob(n) * 0.5, abs=1e-15)
        assert d1.prob(m_) == pytest.approx(d0.prob(m_) + d0.prob(n) * 0.5, abs=1e-15)
        assert varied.dist(outward).entries == base.dist(outward).entries

    def test_pinball_score_unchanged_contrast_changed(self, alphabet, mk):
        c = mk("closure:central:close:palatAlveoLabial")
        t = mk("plosive:central:close:palatAlveoLabial")
        a = mk("vowel:frontLike:open:glottal")
        i = mk("vowel:front:close:glottal")
        n = mk("nasal:central:close:palatAlveoLabial")
        p = mk("plosive:back:close:palatAlveoLabial")
        o = mk("vowel:back:closeMid:glottal")
        l = mk("approximant:backLike:mid:palatAlveoLabial")
        pinball = [ph(c), ph(p), ph(i, L=8), ph(n), ph(p), ph(o), ph(l), ph(c)]
        contrast = [ph(c), ph(t), ph(a, L=9), ph(c), ph(i), ph(n), ph(p),
                    ph(o, L=9), ph(l), ph(c)]
        base = generic_model(alphabet, epsilon=0.05)
        varied = apply(base, Regime(rate=2.0), TransformSpec(TransformKind.ASSIMILATION, 0.5))
        assert score(varied, pinball) == score(base, pinball)
        assert score(varied, contrast) != score(base, contrast)


class TestStraightening:
    def test_sharpens_toward_near_targets(self, mini_alphabet):
        base = generic_model(mini_alphabet, epsilon=0.3)
        mm = {mini_alphabet.symbol_of(m): m for m in mini_alphabet}
        key = CondKey(Unit.RHYME, S, (mm["i"],))
        varied = apply(base, Regime(rate=2.0), TransformSpec(TransformKind.STRAIGHTENING, 1.0))
        d0, d1 = base.dist(key), varied.dist(key)
        near = mm["j"]   # one manner step from i
        far = mm["Q"]    # across manner, frontBack and place
        assert ordinal_distance(mm["i"], near) < ordinal_distance(mm["i"], far)
        assert d1.prob(near) / d0.prob(near) > d1.prob(far) / max(d0.prob(far), 1e-300)
        assert abs(sum(p for _, p in d1.entries) - 1.0) < 1e-9

    def test_distance_symmetry_and_zero(self, mini_alphabet):
        cells = list(mini_alphabet)
        for a in cells:
            assert ordinal_distance(a, a) == 0
            for b in cells:
                assert ordinal_distance(a, b) == ordinal_distance(b, a)


class TestDriftReport:
    def test_self_distance_zero(self, trained):
        report = drift_report(trained, trained)
        assert all(tv == 0.0 for _, tv in report)

    def test_syncope_drift_exactly_on_unstressed(self, trained):
        varied = apply(trained, Regime(rate=2.0), TransformSpec(TransformKind.SYNCOPE, 1.0))
        report = dict(drift_report(trained, varied))
        for key, tv in report.items():
            assert 0.0 <= tv <= 1.0
            if key.stress is U:
                assert tv > 0.0
            else:
                assert tv == 0.0

    def test_sorted_descending(self, trained):
        varied = apply(trained, Regime(rate=3.0), TransformSpec(TransformKind.SYNCOPE, 1.0))
        tvs = [tv for _, tv in drift_report(trained, varied)]
        assert tvs == sorted(tvs, reverse=True)

    def test_alphabet_mismatch(self, trained, alphabet):
        other = generic_model(alphabet)
        with pytest.raises(ModelError):
            drift_report(trained, other)
