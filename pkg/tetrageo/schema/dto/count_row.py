import math

from pydantic import BaseModel, model_validator

CSV_HEADER = ("alpha", "L", "n_exact", "n_pred", "n_cap", "max_pq")


class CountRow(BaseModel):
    alpha: float
    L: float
    n_exact: int
    n_pred: float
    n_cap: int
    max_pq: int

    @model_validator(mode="after")
    def check_counts(self):
        if not all(math.isfinite(value) for value in (self.alpha, self.L, self.n_pred)):
            raise ValueError("count row fields must be finite")
        if self.n_exact % 3 != 0:
            raise ValueError(f"n_exact={self.n_exact} is not a multiple of 3")
        if self.n_exact > self.n_cap:
            raise ValueError(f"n_exact={self.n_exact} exceeds n_cap={self.n_cap}")
        return self

    def csv_values(self) -> list:
        data = self.model_dump()
        return [data[key] for key in CSV_HEADER]
