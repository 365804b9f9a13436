"""Generate the code reference pages, the used libraries page and the navigation."""

from pathlib import Path
from typing import List, Tuple

import mkdocs_gen_files


def read_dependencies(requirement_file: str = "pyproject.toml") -> List[Tuple[str, str]]:
    """
    Returns:
        (package, version condition) of every runtime dependency in the poetry manifest
    """
    dependencies: List[Tuple[str, str]] = []
    write = False
    with open(requirement_file, "r") as req_file:
        for line in req_file.read().splitlines():
            line = line.strip()
            if line == "[tool.poetry.dependencies]":
                write = True
                continue
            if not write:
                continue
            if line.startswith("["):
                break
            if not line or line.startswith("#") or line.startswith("python "):
                continue
            package, _, condition = line.partition("=")
            condition = condition.strip().replace('"', "")
            if condition.startswith("{"):
                condition = condition.split("version")[-1].strip(" =}")
            dependencies.append((package.strip().lower(), condition))
    return dependencies


def generate_code_reference_documentation(
    virtual_ref_nav_path: str = "reference",
    ref_md_file: str = "SUMMARY.md",
    req_md_file: str = "requirements.md",
    source_path: str = "fracDec",
    exclude_modules: Tuple[str, ...] = ("__init__", "__main__"),
):
    """Generates the virtual mkdocs md files and adds them to the navigation."""
    nav = mkdocs_gen_files.Nav()

    for path in sorted(Path(source_path).rglob("*.py")):
        module_path = path.relative_to(source_path).with_suffix("")
        doc_path = path.relative_to(source_path).with_suffix(".md")
        full_doc_path = Path(virtual_ref_nav_path, doc_path)
        parts = (source_path,) + tuple(module_path.parts)
        if parts[-1] in exclude_modules:
            continue

        nav[parts[1:]] = doc_path.as_posix()
        with mkdocs_gen_files.open(full_doc_path, "w") as fd:
            ident = ".".join(parts)
            fd.write(f"# {source_path} Module\n")
            fd.write(f"## **``{ident}``**\n***\n\n")
            fd.write(f"::: {ident}")
        mkdocs_gen_files.set_edit_path(full_doc_path, path)

    with mkdocs_gen_files.open(Path(virtual_ref_nav_path, ref_md_file), "w") as nav_file:
        nav_file.writelines(nav.build_literate_nav())

    with mkdocs_gen_files.open(req_md_file, "w") as fd:
        fd.write(f"# {source_path} - Included Libraries\n***\n\n")
        for package, condition in read_dependencies():
            fd.write(f"### **{package}** ``{condition}``\n\n")
            badge = f"https://badge.fury.io/py/{package}.svg"
            fd.write(f"[![PyPI version]({badge})](https://pypi.org/project/{package}/)\n\n")


generate_code_reference_documentation()
