from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "scripts"))

import explore_class  # noqa: E402
import nakayama_family  # noqa: E402
import reproduce_wsa  # noqa: E402


def test_reproduce_wsa(capsys):
    rows = reproduce_wsa.run(reproduce_wsa.Config(vertices=(5,)))
    assert rows[0]["verdict"]["verdict"] == "Isomorphic" and rows[0]["exit"] == 0
    assert "self-folded" in capsys.readouterr().out


def test_nakayama_family(capsys):
    nakayama_family.run(nakayama_family.Config(max_n=2, max_ell=3))
    out = capsys.readouterr().out
    assert " 2   3    6      True [4, 4]" in out


def test_explore_class():
    res = explore_class.run(explore_class.Config(instance="nakayama_2_3", depth=1, vertices=None))
    assert len(res.nodes) == 1
