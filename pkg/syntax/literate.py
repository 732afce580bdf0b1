"""
Literate Markdown support: keep the contents of ```rzk fences and blank out
everything else so line numbers match the original file.
"""

import re

LITERATE_SUFFIX = ".rzk.md"
SOURCE_SUFFIXES = (".rzk", LITERATE_SUFFIX)

_FENCE = re.compile(r"^\s*(`{3,}|~{3,})\s*([^\s`]*)")


def is_literate_path(path: str) -> bool:
    return path.endswith(LITERATE_SUFFIX)


def extract_literate(markdown: str) -> str:
    """Return the rzk code of a Markdown document, one output line per input line.

    Only fences whose info string starts with `rzk` are kept. A fence is
    closed by a line holding the same fence character repeated at least as
    many times. An unterminated rzk fence runs to the end of the file.
    """
    lines = markdown.split("\n")
    out = []
    fence = None
    keep = False
    for line in lines:
        match = _FENCE.match(line)
        if fence is None:
            if match:
                fence = match.group(1)
                keep = match.group(2) == "rzk"
            out.append("")
            continue
        if match and match.group(1)[0] == fence[0] and len(match.group(1)) >= len(fence) \
                and not match.group(2):
            fence = None
            keep = False
            out.append("")
            continue
        out.append(line if keep else "")
    return "\n".join(out)
