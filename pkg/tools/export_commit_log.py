#!/usr/bin/env python3
"""Export a git repository's history in the line-oriented log format.

Produces records of the form consumed by the library / CLI:

    commit: <hash>
    author: <identity>
    date: <RFC3339>
    parent: <hash>          (one line per parent)
    trailer: <Key>: <value> (one line per commit-message trailer)
    ---

Usage:
    python3 tools/export_commit_log.py REPO_DIR [REVISION_RANGE] [--author-field email|name]

The revision range is passed straight to `git log` (e.g. `v1.0.0..HEAD`).
Output goes to stdout; redirect it into your evidence file.
"""

import argparse
import subprocess
import sys

RECORD_SEP = "\x1e"
FIELD_SEP = "\x1f"


def export(repo: str, revision_range: str | None, author_field: str) -> str:
    ident = "%ae" if author_field == "email" else "%an"
    pretty = RECORD_SEP + FIELD_SEP.join(["%H", ident, "%aI", "%P", "%(trailers:only,unfold)"])
    cmd = ["git", "-C", repo, "log", "--reverse", f"--pretty=format:{pretty}"]
    if revision_range:
        cmd.append(revision_range)
    raw = subprocess.run(cmd, check=True, capture_output=True, text=True).stdout

    lines = []
    for chunk in raw.split(RECORD_SEP):
        if not chunk.strip():
            continue
        commit, author, date, parents, trailers = chunk.split(FIELD_SEP)
        lines.append(f"commit: {commit.strip()}")
        lines.append(f"author: {author.strip()}")
        lines.append(f"date: {date.strip()}")
        for parent in parents.split():
            lines.append(f"parent: {parent}")
        for trailer in trailers.splitlines():
            trailer = trailer.strip()
            if trailer:
                lines.append(f"trailer: {trailer}")
        lines.append("---")
    return "\n".join(lines) + ("\n" if lines else "")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("repo", help="path to the git working directory")
    parser.add_argument("range", nargs="?", default=None, help="revision range for git log")
    parser.add_argument("--author-field", choices=("email", "name"), default="email")
    args = parser.parse_args(argv)
    try:
        sys.stdout.write(export(args.repo, args.range, args.author_field))
    except subprocess.CalledProcessError as exc:
        sys.stderr.write(exc.stderr or str(exc))
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
