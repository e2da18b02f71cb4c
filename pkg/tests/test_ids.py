import pytest
from hypothesis import given
from hypothesis import strategies as st

from claimgraph.ids import EmptyNameError, canonicalize_id


def test_full_title():
    assert (
        canonicalize_id("The Dexter Hypertext Reference Model")
        == "the-dexter-hypertext-reference-model"
    )


def test_single_char_lowercased():
    assert canonicalize_id("Z") == "z"


def test_punctuation_and_padding_collapse():
    assert canonicalize_id("  KMS / ZOG ") == "kms-zog"


def test_empty_rejected():
    with pytest.raises(EmptyNameError):
        canonicalize_id("   //  ")


@given(st.text(min_size=1))
def test_idempotent_and_shape(name):
    try:
        canon = canonicalize_id(name)
    except EmptyNameError:
        assert not any(ch.isalnum() for ch in name)
        return
    assert canonicalize_id(canon) == canon
    assert canon == canon.lower()
    assert "--" not in canon
    assert not canon.startswith("-") and not canon.endswith("-")
