"""Segre preserving maps from the bundled corpus and the properties the library computes for them.

Run: python demos/map_properties.py
"""

from __future__ import annotations

from segrekit import det_conjugate_relation, is_segre_transversal, is_transversally_null, segre_nondegeneracy, verify_hspm
from segrekit.corpus import Library
from segrekit.maps import restricted_determinants

lib = Library.bundled(order=10)
for name in lib.names("entry"):
    e = lib.entry(name)
    M, Mp, H = lib.hypersurface(e.source), lib.hypersurface(e.target), lib.segre_map(e.map)
    dz, dc = restricted_determinants(H)
    print(f"{name}: {e.map} from {e.source} to {e.target} (n = {H.n})")
    print(f"  maps into target: {verify_hspm(M, Mp, H)}")
    print(f"  transversal: {is_segre_transversal(H)}")
    print(f"  transversally null: {is_transversally_null(H)}")
    print(f"  det f_z(z,0) = {dz}    det ft_chi(chi,0) = {dc}")
    kind = segre_nondegeneracy(H).kind
    print(f"  nondegeneracy: {kind}")
    if kind == "total":  # the relation compares two nonzero lowest parts
        print(f"  determinant relation: {det_conjugate_relation(H)}")
    print()
