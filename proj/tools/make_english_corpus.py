#!/usr/bin/env python3
"""Builds a natural-language English test corpus from documentation installed on this machine.

Sources, in a fixed order: Perl pod pages, then docstrings of Python modules under the
interpreter's site-packages (parsed with ast, never imported). Each source file becomes one
document. Output is a single file with documents separated by a delimiter line.
"""
import argparse
import ast
import glob
import os
import site
import sys
import sysconfig


def pod_documents():
    for path in sorted(glob.glob("/usr/share/perl/*/pod/*.pod") + glob.glob("/usr/share/perl/*/*.pod")):
        with open(path, encoding="utf-8", errors="ignore") as fh:
            yield fh.read()


def python_documents():
    roots = []
    for p in site.getsitepackages() + [sysconfig.get_paths()["stdlib"]]:
        if os.path.isdir(p) and p not in roots:
            roots.append(p)
    for root in roots:
        for dirpath, dirnames, filenames in os.walk(root):
            dirnames.sort()
            if "test" in os.path.basename(dirpath) or "site-packages" in dirpath[len(root):]:
                continue
            for name in sorted(filenames):
                if not name.endswith(".py"):
                    continue
                try:
                    with open(os.path.join(dirpath, name), encoding="utf-8") as fh:
                        tree = ast.parse(fh.read())
                except (SyntaxError, UnicodeDecodeError, ValueError, RecursionError):
                    continue
                parts = []
                for node in ast.walk(tree):
                    if isinstance(node, (ast.Module, ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef)):
                        doc = ast.get_docstring(node)
                        if doc and len(doc) > 200:
                            parts.append(doc)
                if parts:
                    yield "\n\n".join(parts) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("output")
    ap.add_argument("--bytes", type=int, default=1 << 20, help="stop after this many bytes")
    ap.add_argument("--delimiter", default="%%DOC%%")
    ap.add_argument("--sentinel", default="$")
    args = ap.parse_args()

    written = 0
    with open(args.output, "w", encoding="utf-8", newline="\n") as out:
        for source in (pod_documents, python_documents):
            for doc in source():
                doc = doc.replace(args.sentinel, "").replace("\r", "")
                lines = [ln for ln in doc.split("\n") if ln != args.delimiter]
                doc = "\n".join(lines).strip("\n") + "\n"
                if len(doc.strip()) == 0:
                    continue
                out.write(doc)
                out.write(args.delimiter + "\n")
                written += len(doc.encode("utf-8"))
                if written >= args.bytes:
                    return 0
    print(f"warning: only {written} bytes of text available", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
