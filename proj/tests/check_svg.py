"""Generate a comic with the CLI and check the SVG with an independent XML parser."""
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

SVG = "{http://www.w3.org/2000/svg}"


def main() -> int:
    cli, data = sys.argv[1], Path(sys.argv[2])
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "comic.svg"
        subprocess.run(
            [cli, "generate", str(data / "coauthorship20.csv"), "--nodes", str(data / "coauthorship20.nodes.csv"),
             "--k", "9", "--ego", "1.5", "--top", "15", "--highlight", "5", "--layout", "fixed", "--out", str(out)],
            check=True)
        root = ET.parse(out).getroot()
    problems = []
    if root.tag != SVG + "svg":
        problems.append(f"root element is {root.tag}")
    if root.get("version") != "1.1":
        problems.append("version is not 1.1")
    for attr in ("width", "height", "viewBox"):
        if root.get(attr) is None:
            problems.append(f"missing {attr}")
    if not root.findall(f".//{SVG}circle"):
        problems.append("no node circles")
    if not root.findall(f".//{SVG}text"):
        problems.append("no text")
    for p in problems:
        print("FAIL:", p)
    if not problems:
        print("SVG ok:", sum(1 for _ in root.iter()), "elements")
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
