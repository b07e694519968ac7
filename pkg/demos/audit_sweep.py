"""Run the theorem audit on every corpus entry and tabulate the outcomes.

An outcome is ``confirmed`` when the hypotheses and the conclusion are both
proved, ``hypotheses_not_met`` when some hypothesis is refuted or undecided,
``conclusion_unknown`` when the conclusion is undecided at the working order.
A ``contradicted`` outcome would raise ``AuditFailure``.

Run: python demos/audit_sweep.py
"""

from __future__ import annotations

from segrekit import audit
from segrekit.corpus import Library

lib = Library.bundled(order=10)
rows = []
for name in lib.names("entry"):
    e = lib.entry(name)
    report = audit(lib.hypersurface(e.source), lib.hypersurface(e.target), lib.segre_map(e.map))
    rows.append((name, {k: v.outcome for k, v in report.entries.items()}))

checks = list(rows[0][1])
width = max(len(c) for c in checks)
for name, outcomes in rows:
    print(name)
    for c in checks:
        print(f"  {c:<{width}}  {outcomes[c]}")
