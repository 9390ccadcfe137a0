"""Bundled deterministic environments and the environment registry."""

from tracekit.envs.base import (
    Action,
    BoxSpace,
    ContinuousAction,
    DiscreteAction,
    DiscreteObs,
    DiscreteSpace,
    Environment,
    EnvParams,
    EnvSchema,
    Observation,
    ParamSpec,
    StepResult,
    VectorObs,
    VectorSpace,
    default_params,
    get_schema,
    make,
    register,
    registered_names,
    schemas_document,
    validate_action,
    validate_params,
)
from tracekit.envs.cartpole import CartPole
from tracekit.envs.pointmass import PointMass4
from tracekit.envs.taxigrid import TaxiGrid

__all__ = [
    "Action",
    "BoxSpace",
    "CartPole",
    "ContinuousAction",
    "DiscreteAction",
    "DiscreteObs",
    "DiscreteSpace",
    "Environment",
    "EnvParams",
    "EnvSchema",
    "Observation",
    "ParamSpec",
    "PointMass4",
    "StepResult",
    "TaxiGrid",
    "VectorObs",
    "VectorSpace",
    "default_params",
    "get_schema",
    "make",
    "register",
    "registered_names",
    "schemas_document",
    "validate_action",
    "validate_params",
]
