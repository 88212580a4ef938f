//! Compare placement policies on a fragmented pool.

use manobench::descriptor::Resources;
use manobench::nfvi::{best_fit_score, PlacementPolicy, SimError, VimState};

fn main() -> Result<(), SimError> {
    let mut vim = VimState::create_pool(&[
        Resources::new(8, 16384, 160),
        Resources::new(4, 8192, 80),
        Resources::new(16, 32768, 320),
    ])?;
    vim.allocate("n0", "resident-a", Resources::new(5, 8192, 80))?;
    vim.allocate("n2", "resident-b", Resources::new(4, 8192, 40))?;

    let demand = Resources::new(2, 4096, 40);
    for n in vim.nodes() {
        println!(
            "{}: residual {:?} best-fit score {:.3}",
            n.node_id,
            n.residual(),
            best_fit_score(n, &demand)
        );
    }
    for policy in [
        PlacementPolicy::FirstFit,
        PlacementPolicy::BestFit,
        PlacementPolicy::Random(7),
        PlacementPolicy::Random(8),
    ] {
        println!("{policy:?}: tries {:?}", vim.rank_candidates(&demand, policy));
    }

    let huge = Resources::new(20, 1024, 10);
    println!("20 vCPU: {:?}", vim.place(&huge, PlacementPolicy::BestFit));

    let before = vim.residuals();
    vim.allocate("n1", "tmp", demand)?;
    vim.release("tmp");
    assert_eq!(before, vim.residuals());
    println!("allocate+release leaves residuals untouched");
    Ok(())
}
