"""Attribute catalog: the pool of attributes and value lists puzzles are sampled from."""

from __future__ import annotations

from dataclasses import dataclass


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class AttributeCatalog:
    """Ordered pool of (attribute name, candidate values).

    Every attribute carries at least six distinct values so that any puzzle
    with up to six houses can be populated. The ``Name`` attribute must be
    present; samplers always include it.
    """

    entries: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.entries]
        if len(set(names)) != len(names):
            raise CatalogError("attribute names must be distinct")
        if "Name" not in names:
            raise CatalogError("catalog must contain the 'Name' attribute")
        for name, values in self.entries:
            if len(values) < 6:
                raise CatalogError(f"attribute {name!r} has {len(values)} values, needs >= 6")
            if len(set(values)) != len(values):
                raise CatalogError(f"attribute {name!r} has duplicate values")

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def values_of(self, name: str) -> tuple[str, ...]:
        for entry_name, values in self.entries:
            if entry_name == name:
                return values
        raise KeyError(name)

    @property
    def min_values(self) -> int:
        return min(len(values) for _, values in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


DEFAULT_CATALOG = AttributeCatalog(
    entries=(
        ("Name", ("Arnold", "Eric", "Peter", "Alice", "Bob", "Carol")),
        ("Color", ("red", "green", "blue", "white", "yellow", "purple")),
        ("Nationality", ("British", "German", "Swedish", "Danish", "Norwegian", "Chinese")),
        ("Animal", ("horse", "monkey", "lion", "elephant", "giraffe", "panda")),
        ("Drink", ("tea", "water", "milk", "coffee", "juice", "beer")),
        ("Cigar", ("pall mall", "prince", "dunhill", "blue master", "blends", "yellow monster")),
        ("Food", ("pizza", "spaghetti", "stew", "grilled cheese", "soup", "stir fry")),
        ("Flower", ("roses", "tulips", "daffodils", "lilies", "carnations", "orchids")),
        ("PhoneModel", ("iphone 13", "samsung galaxy s21", "google pixel 6", "oneplus 9", "huawei p50", "xiaomi mi 11")),
        ("Children", ("Fred", "Billy", "Timothy", "Bella", "Samantha", "Meredith")),
        ("Smoothie", ("cherry", "dragonfruit", "watermelon", "lime", "blueberry", "papaya")),
        ("Birthday", ("January", "February", "March", "April", "May", "June")),
        ("Occupation", ("doctor", "engineer", "teacher", "artist", "lawyer", "nurse")),
        ("Height", ("very short", "short", "average", "tall", "very tall", "super tall")),
        ("CarModel", ("tesla model 3", "ford f150", "toyota camry", "honda civic", "bmw 3 series", "chevrolet silverado")),
        ("FavoriteSport", ("soccer", "tennis", "basketball", "swimming", "baseball", "volleyball")),
        ("MusicGenre", ("rock", "jazz", "classical", "pop", "hip hop", "country")),
        ("BookGenre", ("mystery", "science fiction", "romance", "fantasy", "biography", "historical fiction")),
        ("HairColor", ("black", "brown", "blonde", "red", "gray", "auburn")),
        ("Mother", ("Aniya", "Holly", "Janelle", "Kailyn", "Penny", "Sarah")),
        ("HouseStyle", ("victorian", "colonial", "ranch", "craftsman", "modern", "mediterranean")),
        ("Education", ("high school diploma", "associate's degree", "bachelor's degree", "master's degree", "doctorate", "trade school certificate")),
        ("Hobby", ("photography", "cooking", "gardening", "painting", "knitting", "woodworking")),
        ("Vacation", ("beach", "mountain", "city", "cruise", "camping", "safari")),
        ("Pet", ("dog", "cat", "fish", "bird", "hamster", "rabbit")),
    )
)
