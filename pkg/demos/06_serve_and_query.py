"""Serve a results bundle and query the JSON API.

Produces a small bundle, starts the embedded server on an ephemeral
port, hits every read endpoint, imports an extra method for the
session, and shows that rank analysis picks it up immediately.

Run with: python demos/06_serve_and_query.py
"""

import json
import threading
import urllib.request

from fsbench import ForestClassifier, RunConfig, get_selector, make_synthetic, run, timer
from fsbench.runner import write_timings_csv
from fsbench.server import make_server

config = RunConfig(
    output_dir="demo_serve_results",
    cv=2, avg_steps=2, supervised_iter=1, unsupervised_iter=2,
    experiments=("100Percent",), base_seed=11,
)
datasets = [make_synthetic(40, 12, 4, 2, seed=s, name=f"syn{s}") for s in (1, 2)]
methods = [get_selector("Random"), get_selector("Variance_Baseline")]
result = run(config, datasets, methods, classifier=ForestClassifier(n_trees=10))
write_timings_csv(
    timer(config, [get_selector("Variance_Baseline")], vary_param="instances", time_limit=3600),
    result.output_dir / "timings.csv",
)

httpd = make_server(result.output_dir, port=0)
threading.Thread(target=httpd.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{httpd.server_address[1]}"
print(f"serving on {base}\n")


def get(path):
    with urllib.request.urlopen(base + path) as resp:
        return json.loads(resp.read())


print("manifest:", get("/api/manifest"))
curve = get("/api/curves?metric=ACC&experiment=100Percent&dataset=syn1")["curves"][0]
print(f"\nfirst ACC curve ({curve['method']}): {len(curve['points'])} points")
print("ranks:", get("/api/ranks?metric=AUC&experiment=100Percent&stat=mars"))

# session import: clone the Random rows under a new name and re-rank
rows = (result.output_dir / "results.csv").read_text().splitlines()
imported = [rows[0]] + [ln.replace(",Random,", ",MyMethod,") for ln in rows[1:] if ",Random," in ln]
req = urllib.request.Request(base + "/api/import", data="\n".join(imported).encode(), method="POST")
req.add_header("Content-Type", "text/csv")
with urllib.request.urlopen(req) as resp:
    print("\nimport:", json.loads(resp.read()))
print("ranks now include it:", get("/api/ranks?metric=AUC&experiment=100Percent&stat=standard")["methods"])

httpd.shutdown()
httpd.server_close()
