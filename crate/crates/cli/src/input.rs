use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use egw_core::hypergraph::{Hypergraph, HypergraphJson, PairingStrategy};
use egw_core::sat::{parse_dimacs, CnfFormula};
use egw_core::tree::{hyperedges_of_tree, sibling_pairing, BinaryTree};

pub enum Input {
    Tree(BinaryTree),
    Board {
        board: Hypergraph,
        pairing: Option<PairingStrategy>,
        n: Option<usize>,
    },
    Cnf(CnfFormula),
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// JSON objects with `vertices` are boards, with `id` trees; anything else
/// is read as DIMACS.
pub fn load(path: &Path) -> Result<Input> {
    let text = read_text(path)?;
    let ctx = || format!("parsing {}", path.display());
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(&text).with_context(ctx)?;
        if value.get("vertices").is_some() {
            let json: HypergraphJson = serde_json::from_value(value).with_context(ctx)?;
            let n = json.n;
            let (board, pairing) = json.into_hypergraph().with_context(ctx)?;
            return Ok(Input::Board { board, pairing, n });
        }
        if value.get("id").is_some() {
            return Ok(Input::Tree(BinaryTree::from_json(&text).with_context(ctx)?));
        }
        bail!("{}: JSON is neither a board (`vertices`) nor a tree (`id`)", path.display());
    }
    Ok(Input::Cnf(parse_dimacs(&text).with_context(ctx)?))
}

pub fn load_cnf(path: &Path) -> Result<CnfFormula> {
    match load(path)? {
        Input::Cnf(f) => Ok(f),
        _ => bail!("{}: expected a DIMACS cnf file", path.display()),
    }
}

/// A board with its pairing and, for trees, the tree itself.
pub struct BoardInput {
    pub board: Hypergraph,
    pub pairing: Option<PairingStrategy>,
    pub tree: Option<BinaryTree>,
    pub n: Option<usize>,
}

/// Trees become their path board (needs `n`) with the sibling pairing.
pub fn load_board(path: &Path, n: Option<usize>) -> Result<BoardInput> {
    match load(path)? {
        Input::Board { board, pairing, n: declared } => Ok(BoardInput {
            board,
            pairing,
            tree: None,
            n: n.or(declared),
        }),
        Input::Tree(t) => {
            let n = n.ok_or_else(|| anyhow!("{}: a tree input needs --n", path.display()))?;
            let th = hyperedges_of_tree(&t, n)?;
            Ok(BoardInput {
                board: th.hypergraph,
                pairing: Some(sibling_pairing(&t)),
                tree: Some(t),
                n: Some(n),
            })
        }
        Input::Cnf(_) => bail!("{}: expected a board or tree JSON file, found DIMACS", path.display()),
    }
}
