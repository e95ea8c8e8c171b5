"""Regenerate demo/comments.jsonl from the synthetic demo generator."""
import json
from pathlib import Path

from stylecast.synthetic import demo_comments

if __name__ == "__main__":
    out = Path(__file__).with_name("comments.jsonl")
    with open(out, "w", encoding="utf-8") as fh:
        for i, text in enumerate(demo_comments(600, seed=7)):
            fh.write(json.dumps({"id": f"demo-{i}", "text": text}, ensure_ascii=False) + "\n")
    print(f"wrote {out}")
