"""
Shared fixtures for the stt-kernel test suite.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from elaboration import elaborate_module  # noqa: E402
from syntax import parse_module  # noqa: E402

PRELUDE = """
#lang rzk-1

#def Δ¹ : 2 → TOPE := \\ t → ⊤
#def ∂Δ¹ : 2 → TOPE := \\ t → t ≡ 0₂ ∨ t ≡ 1₂
#def Δ² : (2 × 2) → TOPE := \\ (t , s) → s ≤ t
#def Λ²₁ : (2 × 2) → TOPE := \\ (t , s) → s ≡ 0₂ ∨ t ≡ 1₂

#def hom (A : U) (x y : A) : U
  := (t : Δ¹) → A [t ≡ 0₂ ↦ x , t ≡ 1₂ ↦ y]

#def id-hom (A : U) (x : A) : hom A x x := \\ t → x
"""


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the bundled corpus or large property sweeps")


def elaborate(text, env=None, path="<test>.rzk"):
    """Parse and elaborate `text`; returns (env, diagnostics)."""
    return elaborate_module(parse_module(text, path), env)


def error_codes(diagnostics):
    return [d.code.value for d in diagnostics if d.is_error]


@pytest.fixture(scope="session")
def prelude_env():
    env, diagnostics = elaborate(PRELUDE, path="<prelude>.rzk")
    assert error_codes(diagnostics) == []
    return env
