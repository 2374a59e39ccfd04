"""Presentation files, canonical hashing, certificate (de)serialization."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from mixlab.mixing import frobenius_certificate, verify_certificate
from mixlab.presentation import (
    PresentationError,
    canonical_json,
    certificate_from_dict,
    certificate_to_dict,
    load_system,
    parse_system,
    system_hash,
)
from mixlab.ring import GF, LaurentPoly
from mixlab.systems import CharPModule, EvaluationModule, RationalDualModule

SAMPLES = Path(__file__).resolve().parents[1] / "presentations"


def sample(name):
    return load_system(str(SAMPLES / name))


class TestSampleFiles:
    def test_all_samples_load(self):
        for path in sorted(SAMPLES.glob("*.json")):
            loaded = load_system(str(path))
            assert loaded.hash
            assert loaded.system.group.rank >= 1

    def test_three_dot_module(self):
        loaded = sample("ledrappier.json")
        module = loaded.system.module
        assert isinstance(module, CharPModule)
        assert module.characteristic == 2
        gen = LaurentPoly.parse("1 + u1 + u2", 2, GF(2))
        assert module.ideal.contains(gen)

    def test_substitution_variant_same_membership(self):
        groebner = sample("ledrappier.json").system.module.ideal
        subst = sample("ledrappier_substitution.json").system.module.ideal
        for text in ("1 + u1 + u2", "u1", "1 + u1^4 + u2^4"):
            f = LaurentPoly.parse(text, 2, GF(2))
            assert groebner.contains(f) == subst.contains(f)

    def test_evaluation_sample(self):
        loaded = sample("times2times3.json")
        module = loaded.system.module
        assert isinstance(module, EvaluationModule)
        assert module.assignment_map[0] == module.field.from_rational(2)

    def test_rational_dual_sample(self):
        loaded = sample("rational_dual.json")
        assert isinstance(loaded.system.module, RationalDualModule)
        assert loaded.system.group.primes == (2, 3, 5, 7)


class TestHashing:
    def test_hash_ignores_name_and_notes(self):
        base = {
            "schema": 1,
            "group": {"kind": "free_abelian", "d": 1},
            "module": {"type": "rational_dual"},
        }
        a = parse_system({**base, "name": "a", "notes": "x"})
        b = parse_system({**base, "name": "b"})
        assert a.hash == b.hash

    def test_hash_sees_module_changes(self):
        base = {
            "schema": 1,
            "group": {"kind": "free_abelian", "d": 2},
            "module": {
                "type": "char_p",
                "characteristic": 2,
                "generators": ["1 + u1 + u2"],
            },
        }
        other = json.loads(json.dumps(base))
        other["module"]["generators"] = ["1 + u1"]
        assert parse_system(base).hash != parse_system(other).hash

    def test_canonical_json_is_key_sorted(self):
        assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'
        assert system_hash({"a": 1}) == system_hash({"a": 1})


class TestErrors:
    def test_wrong_schema(self):
        with pytest.raises(PresentationError):
            parse_system({"schema": 99, "group": {}, "module": {}})

    def test_missing_module(self):
        with pytest.raises(PresentationError):
            parse_system({"schema": 1, "group": {"kind": "free_abelian", "d": 1}})

    def test_unknown_group(self):
        with pytest.raises(PresentationError):
            parse_system(
                {"schema": 1, "group": {"kind": "dihedral"}, "module": {"type": "rational_dual"}}
            )

    def test_bad_generator_text(self):
        with pytest.raises(PresentationError):
            parse_system(
                {
                    "schema": 1,
                    "group": {"kind": "free_abelian", "d": 1},
                    "module": {
                        "type": "char_p",
                        "characteristic": 2,
                        "generators": ["1 + ???"],
                    },
                }
            )

    def test_malformed_json_reports_position(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema": 1,,}')
        with pytest.raises(PresentationError) as e:
            load_system(str(bad))
        assert "line 1" in str(e.value)


class TestCertificateRoundtrip:
    def test_charp_roundtrip(self):
        loaded = sample("ledrappier.json")
        gen = LaurentPoly.parse("1 + u1 + u2", 2, GF(2))
        cert = frobenius_certificate(loaded.system, gen)
        data = certificate_to_dict(cert, sys_hash=loaded.hash)
        back = certificate_from_dict(
            json.loads(json.dumps(data)), loaded.system
        )
        assert back.order == cert.order
        assert back.shape == tuple(tuple(Fraction(x) for x in g) for g in cert.shape)
        assert back.transcript == cert.transcript
        assert verify_certificate(loaded.system, back).ok

    def test_serialization_is_stable(self):
        loaded = sample("ledrappier.json")
        gen = LaurentPoly.parse("1 + u1 + u2", 2, GF(2))
        blob1 = canonical_json(certificate_to_dict(frobenius_certificate(loaded.system, gen)))
        blob2 = canonical_json(certificate_to_dict(frobenius_certificate(loaded.system, gen)))
        assert blob1 == blob2

    def test_wrong_kind_rejected(self):
        loaded = sample("ledrappier.json")
        with pytest.raises(PresentationError):
            certificate_from_dict({"kind": "something-else"}, loaded.system)
