#!/usr/bin/env python3
"""Download the networks that are not shipped in data/ into data/cache.

Each source is converted to a format the mmdf loader reads:
plain "i j w" edge lists with a "# nodes N" header (1-based ids) or, for the
Slovene parliament network, a Pajek file with an *Edges section.
"""

import argparse
import io
import re
import sys
import tarfile
import urllib.request
import zipfile
from pathlib import Path

SOURCES = {
    "gahuku_gama": "http://konect.cc/files/download.tsv.ucidata-gama.tar.bz2",
    "train_bombing": "http://konect.cc/files/download.tsv.moreno_train.tar.bz2",
    "slovene_parliament": "http://vlado.fmf.uni-lj.si/pub/networks/data/soc/Stranke94.net",
    "political_blogs": "http://www-personal.umich.edu/~mejn/netdata/polblogs.zip",
}


def fetch(url):
    with urllib.request.urlopen(url, timeout=60) as r:
        return r.read()


def write_plain(path, title, n, edges):
    lines = [f"# {title}", f"# nodes {n}"]
    lines += [f"{i} {j} {w:g}" for (i, j), w in sorted(edges.items())]
    path.write_text("\n".join(lines) + "\n")


def add_edge(edges, i, j, w, source):
    if i == j:
        return
    key = (min(i, j), max(i, j))
    if key in edges and edges[key] != w:
        raise ValueError(f"{source}: conflicting weights for pair {key}")
    edges[key] = w


def konect(blob, title, out):
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:bz2") as tar:
        member = next(m for m in tar.getmembers() if Path(m.name).name.startswith("out."))
        text = tar.extractfile(member).read().decode()
    edges, n = {}, 0
    for line in text.splitlines():
        if not line.strip() or line.startswith("%"):
            continue
        parts = line.split()
        i, j = int(parts[0]), int(parts[1])
        w = float(parts[2]) if len(parts) > 2 else 1.0
        add_edge(edges, i, j, w, member.name)
        n = max(n, i, j)
    write_plain(out, title, n, edges)
    return n, len(edges)


def pajek(blob, out):
    text = blob.decode("latin-1")
    vertices, edges, section = [], {}, None
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        if s.startswith("*"):
            section = s.split()[0].lower()
            continue
        if section == "*vertices":
            m = re.match(r'(\d+)\s+"([^"]*)"', s) or re.match(r"(\d+)\s+(\S+)", s)
            vertices.append(m.group(2))
        elif section in ("*edges", "*arcs"):
            parts = s.split()
            add_edge(edges, int(parts[0]), int(parts[1]), float(parts[2]) if len(parts) > 2 else 1.0, "pajek")
    lines = [f"*Vertices {len(vertices)}"]
    lines += [f'{k + 1} "{name}"' for k, name in enumerate(vertices)]
    lines += ["*Edges"] + [f"{i} {j} {w:g}" for (i, j), w in sorted(edges.items())]
    out.write_text("\n".join(lines) + "\n")
    return len(vertices), len(edges)


def polblogs(blob, out, labels_out):
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        text = z.read("polblogs.gml").decode()
    side = {int(a): int(b) for a, b in re.findall(r"node\s*\[\s*id\s+(\d+).*?value\s+(\d+)", text, re.S)}
    adj = {v: set() for v in side}
    for s, t in re.findall(r"edge\s*\[\s*source\s+(\d+)\s+target\s+(\d+)", text):
        s, t = int(s), int(t)
        if s != t:
            adj[s].add(t)
            adj[t].add(s)
    # largest connected component, ignoring direction
    seen, best = set(), []
    for v in sorted(adj):
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for x in adj[u] - seen:
                seen.add(x)
                stack.append(x)
        if len(comp) > len(best):
            best = comp
    index = {v: k + 1 for k, v in enumerate(sorted(best))}
    edges = {}
    for v in best:
        for u in adj[v]:
            add_edge(edges, index[v], index[u], 1.0, "polblogs")
    write_plain(out, "Political blogs 2004, largest component, undirected", len(index), edges)
    labels_out.write_text("".join(f"{side[v] + 1}\n" for v in sorted(best)))
    return len(index), len(edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--only", nargs="*", choices=sorted(SOURCES))
    for name in SOURCES:
        ap.add_argument(f"--{name.replace('_', '-')}-url", dest=f"{name}_url", default=SOURCES[name])
    args = ap.parse_args()
    cache = args.data_dir / "cache"
    cache.mkdir(parents=True, exist_ok=True)

    failed = 0
    for name in args.only or SOURCES:
        url = getattr(args, f"{name}_url")
        try:
            blob = fetch(url)
            if name == "gahuku_gama":
                n, m = konect(blob, "Gahuku-Gama subtribes (alliance +1, enmity -1)", cache / "gahuku_gama.txt")
            elif name == "train_bombing":
                n, m = konect(blob, "Madrid train bombing contacts", cache / "train_bombing.txt")
            elif name == "slovene_parliament":
                n, m = pajek(blob, cache / "slovene_parliament.net")
            else:
                n, m = polblogs(blob, cache / "political_blogs.txt", cache / "political_blogs.labels")
            print(f"{name}: {n} nodes, {m} edges")
        except Exception as e:  # report and keep going with the others
            failed += 1
            print(f"{name}: failed ({url}): {e}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
