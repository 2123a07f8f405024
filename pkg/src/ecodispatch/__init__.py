"""Multi-objective economic dispatch testbed for a greenhouse energy plant.

Simulates a heterogeneous energy plant (CHP, gas boiler, heat pump, district
heating, thermal storage), evolves Pareto-optimal week-long dispatch
schedules minimizing cost and CO2 with constraint-distance objectives,
applies configurable decision strategies, and supports closed-loop
re-planning plus human-in-the-loop actuation through an HTTP service.
"""

from .decisions import (DecisionStrategy, NoFeasibleScheduleError,
                        StrategyComparison, compare_strategies, decide,
                        filter_valid, normalize)
from .dispatch import (DecisionGrid, DispatchProblem, EconomicParams,
                       EvaluatedSolution, ObjectiveVector, Schedule,
                       Trajectory, eval_co2, eval_constraints, eval_cost,
                       evaluate, simulate)
from .forecasts import (ForecastSeries, ForecastSet, SignalSchema,
                        aggregate_to_hourly, assemble_forecast_set,
                        parse_forecast_file)
from .loop import (Emulator, EpisodeLog, LoopConfig, StaleEpochError, actuate,
                   run_episode)
from .moga import (MogaConfig, ParetoArchive, dominates,
                   random_reset_mutation, run, select_parents,
                   single_point_crossover)
from .plant import (PlantInputs, PlantOutputs, TesState, UnitRatings,
                    evaluate_units, tes_energy, tes_step)
from .runconfig import RunConfig, ingest_forecasts, load_run_config

__version__ = "0.1.0"
