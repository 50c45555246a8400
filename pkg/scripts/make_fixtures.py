"""Regenerate the JSON fixtures under fixtures/."""

from pathlib import Path

import numpy as np

from graphcorr import catalog, io
from graphcorr.correspondence import (
    CorrespondenceMorphism,
    change_of_generators,
    graph_correspondence,
    sigma_correspondence,
)
from graphcorr.functor import gamma_on_morphism

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def fixtures() -> dict[str, str]:
    loop = catalog.loop_graph()
    two_cycle = catalog.two_cycle_graph()
    X_loop = graph_correspondence(loop)
    X_two = graph_correspondence(two_cycle)
    inclusion = catalog.parallel_inclusion()

    corrupted = X_two.gram.copy()
    corrupted[0, 0, 1] += 1e-3
    bad = type(X_two)(X_two.vertices, corrupted, X_two.right_action, X_two.left_action, X_two.generators)

    T = np.array([[2.0, 0.0], [0.0, 1j]])
    scrambled = change_of_generators(X_two, T)

    sigma = catalog.swap_sigma()
    return {
        "loop.graph.json": io.dumps(loop),
        "two_cycle.graph.json": io.dumps(two_cycle),
        "two_cycle.corr.json": io.dumps(X_two),
        "two_cycle_scrambled.corr.json": io.dumps(scrambled),
        "two_cycle_corrupted.corr.json": io.dumps(bad),
        "swap.sigma.json": io.dump_sigma(("u", "v"), sigma),
        "swap_sigma.corr.json": io.dumps(sigma_correspondence(sigma)),
        "loop_identity.cmorph.json": io.dumps(CorrespondenceMorphism.identity(X_loop)),
        "loop_phase.cmorph.json": io.dumps(catalog.loop_phase_morphism()),
        "parallel_inclusion.gmorph.json": io.dumps(inclusion),
        "parallel_inclusion.cmorph.json": io.dumps(gamma_on_morphism(inclusion)),
    }


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for name, text in fixtures().items():
        (OUT / name).write_text(text, encoding="utf-8")
        print(OUT / name)
