from .base_recipe import BaseRecipe
from .batch import seeded_batch
from .degradation import degradation_study
from .registry import RecipeRegistry, ZooRecipe, build_default_registry, generate

__all__ = [
    "BaseRecipe",
    "seeded_batch",
    "degradation_study",
    "RecipeRegistry",
    "ZooRecipe",
    "build_default_registry",
    "generate",
]
