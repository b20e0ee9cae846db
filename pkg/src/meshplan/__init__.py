"""meshplan: wireless mesh planning engine and slotted-time simulator.

Pipeline: topology construction and interference mapping, per-link load
estimation under uniform multipath splitting, congestion-aware route
selection with a load threshold, greedy gain-minimizing multi-channel
assignment with TDMA-like activation frames, and a deterministic packet
simulator producing delay / delivery-ratio / throughput metrics against a
seeded random-assignment baseline.
"""

from .channels import (ChannelAssignment, assign_frame, baseline_assign,
                       channel_gain_sum, eligible, order_links,
                       schedule_all_frames)
from .errors import (ConfigurationError, ContractError, MeshPlanError,
                     PipelineError, ScenarioParseError,
                     ScenarioValidationError, UnroutableFlowError)
from .loads import (GoodputReport, LoadEstimate, acceptable_paths_for_profile,
                    enumerate_acceptable_paths, expected_link_load, goodput,
                    link_capacities, path_nodes, virtual_link_capacity)
from .pipeline import (PROTOCOLS, PipelineResult, SweepRow, run_pipeline,
                       sweep_channels, sweep_time)
from .report import emit_report, render_report, result_row
from .routing import (LinkCost, Route, RouteTable, cost_table,
                      fixed_point_route, link_cost, routed_link_loads,
                      select_routes)
from .scenario import (PRESETS, AlgorithmParams, Scenario, SimParams,
                       TopologySpec, load_scenario, parse_scenario,
                       scenario_from_dict)
from .sim import (ServiceAudit, SimConfig, SimMetrics, Simulator,
                  run_simulation)
from .topology import (InterferenceMap, MeshNode, Topology, VirtualLink,
                       build_interference_map, build_topology, link_gain,
                       topology_from_nodes)
from .traffic import Flow, TrafficProfile, vod_flow, voip_flow

__version__ = "0.1.0"
