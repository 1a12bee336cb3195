//! Toy key-exchange scheme over three generator families `a_n, b_n, c_n`,
//! with `a_n^p = b_{f(n,p)}` and `b_m^q = c_{g(m,q)}`.
//!
//! Both parties derive the same shared index because the underlying pair of
//! functions satisfies `g(f(n,p), q) = g(f(n,q), p)`. The concrete
//! instantiation acts on `Z_P^*` by exponentiation (a commutative group
//! action) after one application of the permutation `x -> g0^x`. Shares are
//! transported as expanded commutator words over `{F, s}`, the images of the
//! family generators in the two-generator group built over all three
//! families at once.
//!
//! Toy parameters only: P stays below 2^31 and no security claims are made.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::gfgroup::{canonicalize, parse_gword, push_comm_word, GWord};
use crate::numutil::{gcd_u64, is_prime_u64, is_primitive_root, modpow_u64};

/// Errors from the protocol layer: parameter validation, the session state
/// machine, and the wire format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("invalid instantiation: {0}")]
    InvalidParams(String),
    #[error("key {key} is not coprime to P-1 = {order}")]
    KeyNotCoprime { key: u64, order: u64 },
    #[error("out-of-order message: {0}")]
    OutOfOrder(String),
    #[error("malformed share: {0}")]
    MalformedShare(String),
    #[error("wire format: {0}")]
    Wire(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// The commutative group action instantiation: `X = Z_P^*` enumerated as
/// `x_n = n`, exponents coprime to `P-1` acting by `x -> x^e`, and the
/// one-way permutation `x -> g0^x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionInstantiation {
    p: u64,
    g0: u64,
}

impl ActionInstantiation {
    pub fn new(p: u64, g0: u64) -> Result<Self, ProtocolError> {
        if p < 3 || p >= 1 << 31 || !is_prime_u64(p) {
            return Err(ProtocolError::InvalidParams(format!(
                "P must be an odd prime below 2^31, got {p}"
            )));
        }
        if !is_primitive_root(g0, p) {
            return Err(ProtocolError::InvalidParams(format!(
                "g0 = {g0} does not generate Z_{p}^*"
            )));
        }
        Ok(ActionInstantiation { p, g0 })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn base(&self) -> u64 {
        self.g0
    }

    fn check_index(&self, n: u64) -> Result<(), ProtocolError> {
        if n == 0 || n >= self.p {
            return Err(ProtocolError::InvalidParams(format!(
                "index {n} outside the enumeration 1..{}",
                self.p - 1
            )));
        }
        Ok(())
    }

    fn check_key(&self, key: u64) -> Result<(), ProtocolError> {
        let order = self.p - 1;
        if key == 0 || gcd_u64(key % order, order) != 1 {
            return Err(ProtocolError::KeyNotCoprime { key, order });
        }
        Ok(())
    }
}

/// The paired functions of the scheme with the commutativity relation
/// `g(f(n,p), q) = g(f(n,q), p)`.
#[derive(Debug, Clone)]
pub struct PairFunctions {
    inst: ActionInstantiation,
    description: String,
}

impl PairFunctions {
    pub fn description(&self) -> &str {
        &self.description
    }

    /// `f(n, key) = (g0^n)^key mod P`: the permutation applied once, then
    /// the action.
    pub fn eval_f(&self, n: u64, key: u64) -> Result<u64, ProtocolError> {
        self.inst.check_index(n)?;
        self.inst.check_key(key)?;
        let fed = modpow_u64(self.inst.g0, n, self.inst.p);
        Ok(modpow_u64(fed, key, self.inst.p))
    }

    /// `g(m, key) = m^key mod P`: the action alone, no second permutation.
    pub fn eval_g(&self, m: u64, key: u64) -> Result<u64, ProtocolError> {
        self.inst.check_index(m)?;
        self.inst.check_key(key)?;
        Ok(modpow_u64(m, key, self.inst.p))
    }
}

/// Build the scheme's function pair from an instantiation.
pub fn derive_pair(inst: &ActionInstantiation) -> PairFunctions {
    PairFunctions {
        inst: *inst,
        description: format!(
            "commutative action on Z_{}^*: f(n,k) = (g0^n)^k, g(m,k) = m^k (P={}, g0={})",
            inst.p, inst.p, inst.g0
        ),
    }
}

/// The three generator families of the protocol's chain of groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShareFamily {
    A,
    B,
    C,
}

fn family_offset(family: ShareFamily) -> u64 {
    match family {
        ShareFamily::A => 1,
        ShareFamily::B => 2,
        ShareFamily::C => 3,
    }
}

/// Encode a family generator as the expanded commutator word
/// `[F, F^{s^beta}]` with `beta = 3*index + 1/2/3` for family A/B/C. The
/// offsets keep `beta >= 4`, clear of the parity encoding used inside one
/// family.
pub fn encode_share(family: ShareFamily, index: u64) -> Result<GWord, ProtocolError> {
    if index == 0 {
        return Err(ProtocolError::MalformedShare(
            "share index must be at least 1".into(),
        ));
    }
    let beta = index
        .checked_mul(3)
        .and_then(|v| v.checked_add(family_offset(family)))
        .and_then(|v| i64::try_from(v).ok())
        .ok_or(CoreError::Overflow("share index"))?;
    let mut w = GWord::new();
    push_comm_word(&mut w, beta, &BigInt::one());
    Ok(w)
}

/// Invert [`encode_share`]: the word must canonicalize to a single
/// commutator term `(beta, 0, 1)` with `beta >= 4`.
pub fn decode_share(word: &GWord) -> Result<(ShareFamily, u64), ProtocolError> {
    let cf = canonicalize(word).map_err(ProtocolError::Core)?;
    if !cf.alpha_part.is_empty() || cf.y != 0 || cf.comm_part.len() != 1 {
        return Err(ProtocolError::MalformedShare(format!(
            "expected a single commutator term, got `{cf}`"
        )));
    }
    let t = &cf.comm_part[0];
    if t.gamma != 0 || !t.l.is_one() || t.beta < 4 {
        return Err(ProtocolError::MalformedShare(format!(
            "not a share encoding: `{cf}`"
        )));
    }
    let beta = t.beta as u64;
    let (family, index) = match beta % 3 {
        1 => (ShareFamily::A, (beta - 1) / 3),
        2 => (ShareFamily::B, (beta - 2) / 3),
        _ => (ShareFamily::C, beta / 3 - 1),
    };
    Ok((family, index))
}

/// Which side of the exchange a session plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Initiator,
    Responder,
}

impl Role {
    fn as_str(self) -> &'static str {
        match self {
            Role::Initiator => "initiator",
            Role::Responder => "responder",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Wire message. The line encodings are pinned byte-for-byte:
/// `PARAMS P=<int> g0=<int> n=<int>` and
/// `SHARE role=<initiator|responder> word=<G-word with underscores>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    Params { p: u64, g0: u64, n: u64 },
    Share { role: Role, word: GWord },
}

impl Message {
    pub fn to_line(&self) -> String {
        match self {
            Message::Params { p, g0, n } => format!("PARAMS P={p} g0={g0} n={n}"),
            Message::Share { role, word } => {
                format!("SHARE role={} word={}", role, word.to_string().replace(' ', "_"))
            }
        }
    }

    pub fn parse_line(line: &str) -> Result<Message, ProtocolError> {
        let line = line.trim_end_matches(['\r', '\n']);
        if let Some(rest) = line.strip_prefix("PARAMS ") {
            let fields: Vec<&str> = rest.split(' ').collect();
            let [p, g0, n] = fields.as_slice() else {
                return Err(ProtocolError::Wire(format!(
                    "PARAMS expects exactly three fields, got `{rest}`"
                )));
            };
            return Ok(Message::Params {
                p: field(p, "P")?,
                g0: field(g0, "g0")?,
                n: field(n, "n")?,
            });
        }
        if let Some(rest) = line.strip_prefix("SHARE ") {
            let fields: Vec<&str> = rest.split(' ').collect();
            let [role, word] = fields.as_slice() else {
                return Err(ProtocolError::Wire(format!(
                    "SHARE expects exactly two fields, got `{rest}`"
                )));
            };
            let role = match role.strip_prefix("role=") {
                Some("initiator") => Role::Initiator,
                Some("responder") => Role::Responder,
                _ => return Err(ProtocolError::Wire(format!("bad role field `{role}`"))),
            };
            let word_text = word
                .strip_prefix("word=")
                .ok_or_else(|| ProtocolError::Wire(format!("bad word field `{word}`")))?;
            let word = parse_gword(&word_text.replace('_', " ")).map_err(ProtocolError::Core)?;
            return Ok(Message::Share { role, word });
        }
        Err(ProtocolError::Wire(format!("unknown message `{line}`")))
    }
}

fn field(text: &str, key: &str) -> Result<u64, ProtocolError> {
    text.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| ProtocolError::Wire(format!("expected {key}=<int>, got `{text}`")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionState {
    Init,
    SharedSent,
    Completed,
}

/// One side of the exchange; `step` is a pure transition taking the old
/// session and returning the new one.
#[derive(Debug, Clone)]
pub struct Session {
    role: Role,
    private_key: u64,
    state: SessionState,
    params_sent: bool,
    inst: Option<ActionInstantiation>,
    public_n: Option<u64>,
    shared_index: Option<u64>,
}

impl Session {
    pub fn initiator(
        inst: ActionInstantiation,
        n: u64,
        private_key: u64,
    ) -> Result<Self, ProtocolError> {
        inst.check_index(n)?;
        inst.check_key(private_key)?;
        Ok(Session {
            role: Role::Initiator,
            private_key,
            state: SessionState::Init,
            params_sent: false,
            inst: Some(inst),
            public_n: Some(n),
            shared_index: None,
        })
    }

    /// A responder learns the instantiation and public index from the
    /// initiator's PARAMS message; its key is validated on receipt.
    pub fn responder(private_key: u64) -> Self {
        Session {
            role: Role::Responder,
            private_key,
            state: SessionState::Init,
            params_sent: false,
            inst: None,
            public_n: None,
            shared_index: None,
        }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn state(&self) -> SessionState {
        self.state
    }

    /// Set exactly when the session has completed.
    pub fn shared_index(&self) -> Option<u64> {
        self.shared_index
    }

    fn own_share(&self) -> Result<Message, ProtocolError> {
        let inst = self.inst.expect("share requires parameters");
        let n = self.public_n.expect("share requires public index");
        let m = derive_pair(&inst).eval_f(n, self.private_key)?;
        Ok(Message::Share {
            role: self.role,
            word: encode_share(ShareFamily::B, m)?,
        })
    }

    /// Advance the state machine: `init -> shared_sent -> completed`.
    pub fn step(
        mut self,
        incoming: Option<&Message>,
    ) -> Result<(Session, Option<Message>), ProtocolError> {
        match (self.role, self.state, incoming) {
            (_, SessionState::Completed, _) => Err(ProtocolError::OutOfOrder(
                "session already completed".into(),
            )),
            (Role::Initiator, SessionState::Init, None) => {
                if !self.params_sent {
                    self.params_sent = true;
                    let inst = self.inst.expect("initiator has parameters");
                    let out = Message::Params {
                        p: inst.p,
                        g0: inst.g0,
                        n: self.public_n.expect("initiator has public index"),
                    };
                    Ok((self, Some(out)))
                } else {
                    let out = self.own_share()?;
                    self.state = SessionState::SharedSent;
                    Ok((self, Some(out)))
                }
            }
            (Role::Responder, SessionState::Init, Some(Message::Params { p, g0, n })) => {
                let inst = ActionInstantiation::new(*p, *g0)?;
                inst.check_index(*n)?;
                inst.check_key(self.private_key)?;
                self.inst = Some(inst);
                self.public_n = Some(*n);
                let out = self.own_share()?;
                self.state = SessionState::SharedSent;
                Ok((self, Some(out)))
            }
            (_, SessionState::SharedSent, Some(Message::Share { role, word })) => {
                if *role == self.role {
                    return Err(ProtocolError::OutOfOrder(format!(
                        "received a {role} share while playing {role}"
                    )));
                }
                let (family, m) = decode_share(word)?;
                if family != ShareFamily::B {
                    return Err(ProtocolError::MalformedShare(
                        "peer share must encode a b-family generator".into(),
                    ));
                }
                let inst = self.inst.expect("shared_sent implies parameters");
                self.shared_index = Some(derive_pair(&inst).eval_g(m, self.private_key)?);
                self.state = SessionState::Completed;
                Ok((self, None))
            }
            (_, state, incoming) => Err(ProtocolError::OutOfOrder(format!(
                "{} in state {state:?} cannot handle {}",
                self.role,
                incoming.map_or("no message".to_string(), |m| m.to_line()),
            ))),
        }
    }
}

/// Drive both roles to completion in-process. Returns the two shared indices
/// (always equal) and the ordered message transcript.
pub fn run_exchange(
    inst: &ActionInstantiation,
    n: u64,
    key_a: u64,
    key_b: u64,
) -> Result<(u64, u64, Vec<Message>), ProtocolError> {
    let mut transcript = Vec::new();
    let alice = Session::initiator(*inst, n, key_a)?;
    inst.check_key(key_b)?;
    let bob = Session::responder(key_b);

    let (alice, params) = alice.step(None)?;
    let params = params.expect("initiator emits PARAMS first");
    transcript.push(params.clone());
    let (alice, share_a) = alice.step(None)?;
    let share_a = share_a.expect("initiator emits its share second");
    transcript.push(share_a.clone());

    let (bob, share_b) = bob.step(Some(&params))?;
    let share_b = share_b.expect("responder answers PARAMS with its share");
    transcript.push(share_b.clone());
    let (bob, none) = bob.step(Some(&share_a))?;
    debug_assert!(none.is_none());
    let (alice, none) = alice.step(Some(&share_b))?;
    debug_assert!(none.is_none());

    let shared_a = alice.shared_index().expect("initiator completed");
    let shared_b = bob.shared_index().expect("responder completed");
    Ok((shared_a, shared_b, transcript))
}
