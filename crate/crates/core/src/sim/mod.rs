//! Budget-allocation tasks and simulated decision makers.

pub mod agents;
pub mod profile;
pub mod rng;
pub mod session;
pub mod task;

pub use agents::{
    basic_heuristic_agent, bundle_from_share, ces_rational_agent, ces_utility, random_uniform_agent,
    specialist_agent, specialist_decision, RoundContext, SpecialistChoice,
};
pub use profile::{AgentKind, AgentProfile, CesPreferences, DomainRule, ExternalCommand};
pub use session::{run_session, SessionTrace};
pub use task::{generate_session, load_tasks, save_tasks, RiskRegime, RoundSpec, SessionConfig};
