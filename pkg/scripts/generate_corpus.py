#!/usr/bin/env python3
"""Regenerate the bundled .alg documents that mirror the builtin catalog.

Hand-written corpus files (plane_forms.alg and the bad_*.alg error cases) are
left alone.  A test asserts the bundled text matches this generator, so run
this after changing the catalog or the serializer.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from algforge.catalog import (
    builtin,
    e0_complex_structure,
    e0_kernel_sections,
    make_tangent,
    torsionfree_gamma,
)
from algforge.connection import EConnection, derive_bundle, flat_connection
from algforge.dsl import algebroid_to_document, serialize
from algforge.forms import Form
from algforge.poly import Poly

CORPUS = Path(__file__).resolve().parents[1] / "src" / "algforge" / "corpus"


def build_documents() -> dict[str, str]:
    docs: dict[str, str] = {}

    e0 = builtin("E0")
    tf = EConnection(e0, torsionfree_gamma(e0), name="torsionfree")
    identity = [
        [Poly.const(2, 1 if i == j else 0) for j in range(4)] for i in range(4)
    ]
    docs["E0.alg"] = serialize(
        algebroid_to_document(
            e0,
            sections=dict(e0_kernel_sections()),
            connections={"torsionfree": tf, "flat": flat_connection(e0)},
            endos={"J0": e0_complex_structure()},
            cometrics={"G_id": identity},
            forms={"omega21": Form.dual(e0, 1)},
        )
    )

    for name in ("E0_itemized", "E0prime", "E0prime_lie", "E0doubleprime", "E00"):
        docs[f"{name}.alg"] = serialize(algebroid_to_document(builtin(name)))

    t2 = make_tangent(2)
    docs["tangent2.alg"] = serialize(
        algebroid_to_document(t2, connections={"flat": flat_connection(t2)})
    )

    d = derive_bundle(tf)
    docs["derived_e0.alg"] = serialize(
        algebroid_to_document(d.derived, connections={"lifted": d.lifted})
    )

    return docs


def main() -> None:
    CORPUS.mkdir(parents=True, exist_ok=True)
    for name, text in build_documents().items():
        path = CORPUS / name
        old = path.read_text() if path.exists() else None
        path.write_text(text)
        print(("up-to-date " if old == text else "wrote      ") + str(path))


if __name__ == "__main__":
    main()
