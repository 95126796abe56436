from pathlib import Path

import pytest

from kfix.kconfig import link, load_model, parse_text

MODELS = Path(__file__).resolve().parent.parent / "models"

SUITE = ["media", "arch", "modules", "choices", "nonbool", "deep", "kitchen"]


def model_path(name: str) -> str:
    return str(MODELS / name / "Kconfig")


def load(name: str):
    return load_model(model_path(name))


def from_text(text: str):
    return link(parse_text(text))


@pytest.fixture
def listing():
    return load("listing")


@pytest.fixture
def media():
    return load("media")
