"""Multi-agent hourly simulation of the microgrid."""

from .kernel import simulate_fast
from .log import DEPARTURE_COLUMNS, HOURLY_COLUMNS, SimulationLog
from .protocol import (
    AgentMessage,
    ControlAgent,
    DesignAgent,
    GenerationAgent,
    LoadAgent,
    MessageBus,
    MessageKind,
    StationAgent,
    build_mas,
    run_simulation,
)
from .rules import (
    dispatch_step,
    ga_store_surplus,
    ga_supply_shortage,
    new_day_state,
    sa_process_hour,
    sa_settle_departure,
)
from .station import StationInput, station_input
from .types import (
    PUBLISHED_FIXED_SIZING,
    PUBLISHED_DEFERRABLE_SIZING,
    DispatchDecision,
    Scenario,
    SimulationConfig,
    StationDayState,
    SystemSizing,
)
