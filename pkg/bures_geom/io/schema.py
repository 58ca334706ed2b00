# ============================================================
# 📦 JSON schema
# {"kind": ..., "blocks": [{"dim": n, "re": [[...]], "im": [[...]]}]}
# for forms, elements and HS vectors; {"block_dims": [...]} for
# algebras. Every validation failure surfaces as ParseError.
# ============================================================

from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..algebra.blocks import Algebra, Blockwise, PositiveForm
from ..errors import AlgebraMismatch, ParseError
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy
from ..standard.form import HSVector
from ..utils.files import read_json

MatrixKind = Literal["density", "hs_vector", "element"]


class BlockModel(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    dim: int = Field(ge=1)
    re: list[list[float]]
    im: list[list[float]] | None = None

    @model_validator(mode="after")
    def _square(self) -> "BlockModel":
        for name, rows in (("re", self.re), ("im", self.im)):
            if rows is None:
                continue
            if len(rows) != self.dim or any(len(r) != self.dim for r in rows):
                raise ValueError(f"'{name}' must be a {self.dim}×{self.dim} array")
        return self

    def to_matrix(self) -> np.ndarray:
        M = np.array(self.re, dtype=np.complex128)
        if self.im is not None:
            M = M + 1j * np.array(self.im, dtype=np.float64)
        return M

    @classmethod
    def from_matrix(cls, M: np.ndarray) -> "BlockModel":
        return cls(dim=M.shape[0], re=M.real.tolist(), im=M.imag.tolist())


class MatrixFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: MatrixKind
    blocks: list[BlockModel] = Field(min_length=1)

    @property
    def block_dims(self) -> tuple[int, ...]:
        return tuple(b.dim for b in self.blocks)


class AlgebraFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    block_dims: list[int] = Field(min_length=1)

    @model_validator(mode="after")
    def _positive(self) -> "AlgebraFile":
        if any(n < 1 for n in self.block_dims):
            raise ValueError("block dimensions must be ≥ 1")
        return self


# ------------------------------------------------------------
# 📥 Loading
# ------------------------------------------------------------
def _validate(model: type[BaseModel], payload, source: str):
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        raise ParseError(f"{source}: {e.error_count()} schema error(s)\n{e}") from None


def load_algebra(path: Path) -> Algebra:
    """An algebra file, or any matrix file whose block sizes define the algebra."""
    payload = read_json(path)
    if isinstance(payload, dict) and "block_dims" in payload:
        return Algebra(_validate(AlgebraFile, payload, str(path)).block_dims)
    return Algebra(_validate(MatrixFile, payload, str(path)).block_dims)


def _load_matrices(path: Path, algebra: Algebra, kind: MatrixKind) -> list[np.ndarray]:
    doc = _validate(MatrixFile, read_json(path), str(path))
    if doc.kind != kind:
        raise ParseError(f"{path}: expected kind '{kind}', found '{doc.kind}'")
    if doc.block_dims != algebra.block_dims:
        raise AlgebraMismatch(f"{path}: blocks {doc.block_dims} do not match {algebra}")
    return [b.to_matrix() for b in doc.blocks]


def load_form(path: Path, algebra: Algebra, policy: TolerancePolicy = DEFAULT_POLICY) -> PositiveForm:
    return PositiveForm(algebra, _load_matrices(path, algebra, "density"), policy)


def load_vector(path: Path, algebra: Algebra) -> HSVector:
    return HSVector(algebra, _load_matrices(path, algebra, "hs_vector"))


# ------------------------------------------------------------
# 📤 Dumping
# ------------------------------------------------------------
def dump_matrices(kind: MatrixKind, blocks) -> dict:
    return MatrixFile(kind=kind, blocks=[BlockModel.from_matrix(np.asarray(b)) for b in blocks]).model_dump()


def dump_form(form: PositiveForm) -> dict:
    return dump_matrices("density", form.densities)


def dump_blockwise(item: Blockwise) -> dict:
    kind: MatrixKind = "hs_vector" if isinstance(item, HSVector) else "element"
    return dump_matrices(kind, item.blocks)
