from enum import Enum
from typing import Generic, Iterator, List, TypeVar, Union, overload

from pydantic import BaseModel, ConfigDict
from typing_extensions import SupportsIndex

T = TypeVar("T")


class HypDiskModel(BaseModel):
    model_config = ConfigDict(
        protected_namespaces=(),
        arbitrary_types_allowed=True,
    )


class FrozenModel(HypDiskModel):
    model_config = ConfigDict(
        protected_namespaces=(),
        arbitrary_types_allowed=True,
        frozen=True,
    )


class ValueFlag(str, Enum):
    # A_phi at a zero of phi'.
    INFINITE = "INF"


class ResultList(Generic[T]):
    """
    Ordered result container returned by the scans (components, critical points,
    endpoints). Behaves like a read-only list.
    """

    def __init__(self, data: List[T]):
        self.data = data

    def __len__(self) -> int:
        return len(self.data)

    def __iter__(self) -> Iterator[T]:
        return iter(self.data)

    @overload
    def __getitem__(self, key: SupportsIndex) -> T: ...

    @overload
    def __getitem__(self, key: slice) -> List[T]: ...

    def __getitem__(self, key: Union[SupportsIndex, slice]) -> Union[T, List[T]]:
        return self.data[key]

    def __contains__(self, key: object) -> bool:
        return key in self.data

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ResultList):
            return self.data == other.data
        if isinstance(other, list):
            return self.data == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"ResultList({self.data!r})"
