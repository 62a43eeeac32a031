mod charmat;
mod example;
mod selfadjoint;
mod verify;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::args::{Cli, Command};
use crate::error::CliResult;
use crate::report::Report;

/// A finished command: its report plus the sidecar files to write.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub files: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    fn new(report: Report) -> Self {
        Outcome {
            report,
            files: Vec::new(),
        }
    }

    fn file(mut self, name: &str, bytes: Vec<u8>) -> Self {
        self.files.push((name.to_string(), bytes));
        self
    }

    /// `values.json`: quantities that are reported but not compared.
    fn values(self, values: &BTreeMap<&str, serde_json::Value>) -> Self {
        self.file("values.json", json_bytes(values))
    }
}

pub(crate) fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("plain data serializes");
    bytes.push(b'\n');
    bytes
}

pub fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Charmat(a) => charmat::run(cli, a),
        Command::Verify(a) => verify::run(cli, a),
        Command::ExampleDirichlet(a) => example::run(cli, a),
        Command::Selfadjoint(a) => selfadjoint::run(cli, a),
    }
}
