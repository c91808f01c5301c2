"""
Recipe registry: the named chain families available to the CLI and tests.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List

from pydantic import BaseModel, Field

from chain.core import ChainSpec
from zoo.base_recipe import BaseRecipe
from zoo.recipes import (
    Cycle,
    Lazy,
    MetropolisGrid,
    RandomDense,
    RandomReversible,
    TruncatedHeavyTail,
    TwoState,
    Uniform,
)

logger = logging.getLogger(__name__)


class ZooRecipe(BaseModel):
    """A recipe name plus its parameters, e.g. kind="cycle", params={"N": 3}."""

    kind: str
    params: Dict[str, Any] = Field(default_factory=dict)

    model_config = {"arbitrary_types_allowed": True}


class RecipeRegistry:
    def __init__(self) -> None:
        self._recipes: Dict[str, BaseRecipe] = {}

    def register(self, recipe: BaseRecipe) -> None:
        """Register a recipe. Raises if duplicate name."""
        if recipe.name in self._recipes:
            raise ValueError(f"Recipe '{recipe.name}' already registered.")
        self._recipes[recipe.name] = recipe
        logger.debug("Registered recipe: %s", recipe.name)

    def get(self, name: str) -> BaseRecipe:
        if name not in self._recipes:
            raise KeyError(f"Recipe '{name}' not in registry. Available: {list(self._recipes)}")
        return self._recipes[name]

    def list_recipes(self) -> List[Dict[str, str]]:
        return [{"name": r.name, "description": r.description} for r in self._recipes.values()]

    @property
    def recipe_names(self) -> List[str]:
        return list(self._recipes)

    def __contains__(self, name: str) -> bool:
        return name in self._recipes

    def __len__(self) -> int:
        return len(self._recipes)

    def generate(self, recipe: ZooRecipe) -> ChainSpec:
        chain = self.get(recipe.kind).generate(**recipe.params)
        logger.info("Generated %s chain with %d states", recipe.kind, chain.n)
        return chain


def build_default_registry() -> RecipeRegistry:
    registry = RecipeRegistry()
    for recipe in (
        TwoState(),
        Cycle(),
        Uniform(),
        RandomDense(),
        RandomReversible(),
        MetropolisGrid(),
        TruncatedHeavyTail(),
        Lazy(),
    ):
        registry.register(recipe)
    return registry


def generate(recipe: ZooRecipe) -> ChainSpec:
    return build_default_registry().generate(recipe)
