pub mod embed;
pub mod filter;
pub mod metrics;
pub mod select;
pub mod session;
pub mod simulate;

use std::path::Path;

use anyhow::Result;
use dispersive_core::io::write_atomic;

pub(crate) fn write_out(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    write_atomic(path, contents.as_ref())?;
    log::info!("wrote {}", path.display());
    Ok(())
}
