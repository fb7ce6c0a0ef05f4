"""Build a few matching codes, check their relations and derive the anyon model.

Run with ``python demos/codes_and_anyons.py``.
"""

from matchcodes.anyons import derive_fusion_table, exchange_triples, fermion_exchange_phase
from matchcodes.code import build, random_bicolorable_matching, verify_relations
from matchcodes.lattice import honeycomb_torus, label_matching, wen_matching


def main():
    lat = honeycomb_torus(4, 4)
    random_m, attempt = random_bicolorable_matching(lat, 11)
    codes = {
        "z-links": build(lat, label_matching(lat, "z")),
        "wen": build(lat, wen_matching(lat)),
        f"random:11 (attempt {attempt})": build(lat, random_m),
    }
    for name, code in codes.items():
        print(f"== {name}")
        print("\n".join(verify_relations(code).lines()))
        table = derive_fusion_table(code)
        print(table.grid())
        print(f"m taken from: {table.m_source}\n")

    # The fermion is a fermion: the exchange sequence gives -1 for every triple.
    code = codes["z-links"]
    phases = {int(fermion_exchange_phase(code, *t).real) for t in exchange_triples(code)}
    print(f"exchange phases over all triples: {sorted(phases)}")

    # An odd number of plaquette rows leaves no consistent colouring.
    odd = honeycomb_torus(3, 3)
    rep = verify_relations(build(odd, label_matching(odd, "z")))
    print(f"z-links on a 3x3 torus: rank {rep.rank}/{rep.num_generators}, relations ok: {rep.ok}")


if __name__ == "__main__":
    main()
