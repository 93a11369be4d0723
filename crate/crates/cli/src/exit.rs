use std::fmt;

pub const CLEAN: u8 = 0;
pub const VIOLATION: u8 = 1;
pub const USAGE: u8 = 2;

/// A usage or input error; always exit code 2.
#[derive(Debug)]
pub struct Failure(String);

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure(msg.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<domcon::Error> for Failure {
    fn from(e: domcon::Error) -> Self {
        Failure(e.to_string())
    }
}
