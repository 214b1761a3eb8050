from .sliced import evaluation_directions, sliced_w2

__all__ = [
    "evaluation_directions",
    "sliced_w2",
]
