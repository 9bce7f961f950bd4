//! Declarative parameter sweeps over states, channels and detectors.

pub mod config;
pub mod engine;
pub mod figures;
pub mod output;

pub use config::{DetectorConfig, Expectation, ModeConfig, ScenarioConfig, StateConfig, SweepConfig, SweepParameter};
pub use engine::{run_generic, MeasureErrors, SweepRecord, SweepResult, TOOL_VERSION};
pub use figures::{
    run_config, run_dissipation_revival, run_energy_comparison, run_entangled_attenuation, run_modulation_sweep,
    DissipationRevival, EnergyComparison, EntangledAttenuation, Figure, FigureOptions, FigureRun,
    ModulationSweep, Verdict, VerdictStatus,
};
