"""Tests that the published JSON schemas stay in step with the pydantic documents."""
import json
from pathlib import Path

import pytest

from app.api import schemas
from app.api.commands import HANDLERS

DOCS = Path(__file__).resolve().parents[1] / "docs"
MANIFEST = json.loads((DOCS / "manifest.json").read_text())


@pytest.mark.parametrize("filename", sorted(MANIFEST))
def test_schema_matches_model(filename):
    """Properties and required fields agree with the model behind each schema."""
    entry = MANIFEST[filename]
    schema = json.loads((DOCS / "schemas" / filename).read_text())
    model = getattr(schemas, entry["model"])
    assert schema["title"] == entry["model"]
    assert set(schema["properties"]) == set(model.model_fields)
    required = {name for name, f in model.model_fields.items() if f.is_required()}
    assert set(schema.get("required", [])) == required


@pytest.mark.parametrize("filename", sorted(MANIFEST))
def test_schema_commands_exist(filename):
    """Every command a schema documents is a CLI subcommand."""
    for command in MANIFEST[filename]["commands"]:
        assert command in HANDLERS


def test_every_command_has_a_schema():
    """No subcommand emits an undocumented JSON shape."""
    documented = {c for entry in MANIFEST.values() for c in entry["commands"]}
    assert documented == set(HANDLERS)


def test_documents_round_trip_through_json():
    """A dumped document validates back into an equal model."""
    doc = schemas.VerdictDocument(relation="unit", holds=True, detail="ok",
                                  certificate=[schemas.RankRow(i=0, delta=0, rank=1, dim=1)])
    assert schemas.VerdictDocument.model_validate_json(doc.model_dump_json()) == doc
