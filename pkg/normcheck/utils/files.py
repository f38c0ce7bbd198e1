"""
UTF-8 file helpers
"""
from os import path

from safeIO import TextFile

ASSETS_DIR = path.join(path.dirname(path.dirname(path.abspath(__file__))), "assets")


def resolve_path(file_path: str) -> str:
    """
    Returns `file_path` if it exists, else the bundled asset with the same name if there is one
    """
    file_path = str(file_path)
    if path.isfile(file_path):
        return file_path
    bundled = path.join(ASSETS_DIR, path.basename(file_path))
    if path.basename(file_path) and path.isfile(bundled):
        return bundled
    raise FileNotFoundError("No such file: {path}".format(path=file_path))


def read_text(file_path: str) -> str:
    """Reads the whole file (or bundled asset) as UTF-8 text"""
    return TextFile(resolve_path(file_path), encoding="utf-8").read()


def write_text(file_path: str, data: str) -> None:
    TextFile(str(file_path), encoding="utf-8").write(data)


def asset_path(name: str) -> str:
    return path.join(ASSETS_DIR, name)
