from .sphere import ProjectionSet, sample_sphere, project

__all__ = [
    "ProjectionSet",
    "sample_sphere",
    "project",
]
