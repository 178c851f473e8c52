"""Classify a handful of semiloops and show the machine-readable reports.

Run: python demos/04_classify.py
"""
from semiloop import SemiloopSpec, classify

corpus = [
    ("h(h(h(x_2,h(x_1,x_1)),x_3),#a)", "h(h(y_4,y_3),h(y_1,y_2))"),
    ("h(h(x_6,h(x_1,x_6)),#a)", "h(y_1,h(y_2,y_1))"),
    ("h(#a,h(h(h(x_1,x_1),x_1),x_1))", "h(h(h(h(y_1,y_1),y_1),y_1),y_1)"),
    ("h(h(x_1,h(x_16,h(x_32,h(x_1,h(x_16,x_32))))),#a)",
     "h(y_1,h(y_2,h(y_3,h(y_1,h(y_2,y_3)))))"),
]
for s, t in corpus:
    c = classify(SemiloopSpec.parse(s, t))
    head = [ln for ln in c.to_text().splitlines() if not ln.startswith("ext.")]
    print(f"<{s}, {t}|")
    print("  " + "\n  ".join(head))
    print()
