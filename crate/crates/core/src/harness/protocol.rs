//! Line-delimited JSON protocol for agents running as child processes.
//!
//! For every round the harness writes one request line to the child's
//! standard input and waits for one response line on its standard output:
//!
//! ```text
//! → {"round":1,"prices":[1.02,0.97],"budget":100.0,"history":[]}
//! ← {"choice":[49.0,51.5]}
//! ```
//!
//! `round` is 1-based. `history` lists earlier rounds of the session as
//! `{"prices":[..],"budget":m,"choice":[..]}`. A response that does not
//! parse, has the wrong length, contains negative or non-finite quantities,
//! overspends the budget, or arrives after the timeout fails the session.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::choice::{Bundle, Observation};
use crate::error::{Error, Result};
use crate::sim::agents::{
    basic_heuristic_agent, ces_rational_agent, random_uniform_agent, specialist_agent, RoundContext,
};
use crate::sim::profile::{AgentKind, AgentProfile, ExternalCommand};

/// Relative overspend an external agent is allowed before its response is
/// rejected.
pub const OVERSPEND_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub prices: Vec<f64>,
    pub budget: f64,
    pub choice: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRequest {
    pub round: usize,
    pub prices: Vec<f64>,
    pub budget: f64,
    pub history: Vec<HistoryEntry>,
}

impl AgentRequest {
    pub fn from_context(ctx: &RoundContext<'_>) -> Self {
        AgentRequest {
            round: ctx.round + 1,
            prices: ctx.prices.to_vec(),
            budget: ctx.budget,
            history: ctx
                .history
                .iter()
                .map(|o| HistoryEntry {
                    prices: o.prices().to_vec(),
                    budget: o.budget(),
                    choice: o.choice().quantities().to_vec(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentResponse {
    pub choice: Vec<f64>,
}

/// Checks a response line against the request it answers.
pub fn parse_response(line: &str, request: &AgentRequest) -> Result<Bundle> {
    let resp: AgentResponse = serde_json::from_str(line.trim())
        .map_err(|e| Error::Protocol(format!("round {}: malformed response: {e}", request.round)))?;
    if resp.choice.len() != request.prices.len() {
        return Err(Error::Protocol(format!(
            "round {}: expected {} quantities, got {}",
            request.round,
            request.prices.len(),
            resp.choice.len()
        )));
    }
    let bundle = Bundle::new(resp.choice).map_err(|e| Error::Protocol(format!("round {}: {e}", request.round)))?;
    let spent: f64 = request.prices.iter().zip(bundle.quantities()).map(|(p, x)| p * x).sum();
    if spent > request.budget * (1.0 + OVERSPEND_TOLERANCE) {
        return Err(Error::Protocol(format!(
            "round {}: choice costs {spent}, budget is {}",
            request.round, request.budget
        )));
    }
    Ok(bundle)
}

/// A running child process that answers one request per round.
pub struct ExternalAgent {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
}

impl ExternalAgent {
    pub fn spawn(cmd: &ExternalCommand) -> Result<Self> {
        let mut child = Command::new(&cmd.program)
            .args(&cmd.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Protocol(format!("cannot start `{}`: {e}", cmd.program)))?;
        let stdout = child.stdout.take().expect("stdout is piped");
        let stdin = child.stdin.take();
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ExternalAgent {
            child,
            stdin,
            lines: rx,
            timeout: Duration::from_millis(cmd.timeout_ms),
        })
    }

    pub fn decide(&mut self, ctx: &RoundContext<'_>) -> Result<Bundle> {
        let request = AgentRequest::from_context(ctx);
        let mut line = serde_json::to_string(&request)?;
        line.push('\n');
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| Error::Protocol("agent input already closed".into()))?;
        stdin
            .write_all(line.as_bytes())
            .and_then(|_| stdin.flush())
            .map_err(|e| Error::Protocol(format!("round {}: cannot write request: {e}", request.round)))?;
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(text)) => parse_response(&text, &request),
            Ok(Err(e)) => Err(Error::Protocol(format!("round {}: read failed: {e}", request.round))),
            Err(RecvTimeoutError::Timeout) => Err(Error::Protocol(format!(
                "round {}: no response within {} ms",
                request.round,
                self.timeout.as_millis()
            ))),
            Err(RecvTimeoutError::Disconnected) => {
                Err(Error::Protocol(format!("round {}: agent closed its output", request.round)))
            }
        }
    }

    /// Closes the agent's input and reaps the process.
    pub fn finish(mut self) {
        self.shutdown();
    }

    fn shutdown(&mut self) {
        self.stdin.take();
        if matches!(self.child.try_wait(), Ok(None)) {
            thread::sleep(Duration::from_millis(10));
            if matches!(self.child.try_wait(), Ok(None)) {
                let _ = self.child.kill();
            }
        }
        let _ = self.child.wait();
    }
}

impl Drop for ExternalAgent {
    fn drop(&mut self) {
        self.shutdown();
    }
}

/// Answers protocol requests from `input` with a built-in policy until the
/// input ends. This is the agent side of the protocol, used to test
/// integrations and as a reference for writing new agents.
pub fn serve<R: BufRead, W: Write>(profile: &AgentProfile, input: R, mut output: W) -> Result<usize> {
    profile.validate()?;
    let mut answered = 0;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let request: AgentRequest = serde_json::from_str(&line)
            .map_err(|e| Error::Protocol(format!("malformed request: {e}")))?;
        let history = request
            .history
            .iter()
            .map(|h| Observation::new(h.prices.clone(), h.budget, h.choice.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut ctx = RoundContext::new(&request.prices, request.budget, &history);
        ctx.round = request.round.saturating_sub(1);
        let bundle = match profile.kind {
            AgentKind::CesRational => ces_rational_agent(&ctx, profile)?,
            AgentKind::BasicHeuristic => basic_heuristic_agent(&ctx, profile)?,
            AgentKind::RandomUniform => random_uniform_agent(&ctx, profile)?,
            AgentKind::Specialist => specialist_agent(&ctx, profile)?,
            AgentKind::External => return Err(Error::Config("cannot serve an external agent".into())),
        };
        let response = AgentResponse {
            choice: bundle.quantities().to_vec(),
        };
        serde_json::to_writer(&mut output, &response)?;
        output.write_all(b"\n")?;
        output.flush()?;
        answered += 1;
    }
    Ok(answered)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request() -> AgentRequest {
        AgentRequest {
            round: 3,
            prices: vec![1.0, 2.0],
            budget: 100.0,
            history: vec![],
        }
    }

    #[test]
    fn request_wire_shape() {
        let history = vec![Observation::new(vec![1.0, 1.0], 100.0, vec![50.0, 50.0]).unwrap()];
        let prices = [1.0, 2.0];
        let ctx = RoundContext::new(&prices, 100.0, &history);
        let line = serde_json::to_string(&AgentRequest::from_context(&ctx)).unwrap();
        assert_eq!(
            line,
            r#"{"round":2,"prices":[1.0,2.0],"budget":100.0,"history":[{"prices":[1.0,1.0],"budget":100.0,"choice":[50.0,50.0]}]}"#
        );
    }

    #[test]
    fn response_checks() {
        let r = request();
        assert_eq!(parse_response(r#"{"choice":[50,25]}"#, &r).unwrap().quantities(), &[50.0, 25.0]);
        assert!(parse_response("not json", &r).is_err());
        assert!(parse_response(r#"{"choice":[50]}"#, &r).is_err());
        assert!(parse_response(r#"{"choice":[-1,25]}"#, &r).is_err());
        assert!(parse_response(r#"{"choice":[60,25]}"#, &r).is_err());
        assert!(parse_response(r#"{"pick":[50,25]}"#, &r).is_err());
    }

    #[test]
    fn serve_answers_each_line() {
        let profile = AgentProfile::ces_rational("cd", 0.5, 0.0);
        let input = format!("{}\n\n{}\n", serde_json::to_string(&request()).unwrap(), serde_json::to_string(&request()).unwrap());
        let mut out = Vec::new();
        assert_eq!(serve(&profile, input.as_bytes(), &mut out).unwrap(), 2);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "{\"choice\":[50.0,25.0]}\n{\"choice\":[50.0,25.0]}\n");
    }

    #[test]
    fn missing_program_is_protocol_error() {
        let cmd = ExternalCommand {
            program: "/nonexistent/agent-binary".into(),
            args: vec![],
            timeout_ms: 100,
        };
        assert!(matches!(ExternalAgent::spawn(&cmd), Err(Error::Protocol(_))));
    }
}
