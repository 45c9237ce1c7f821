use std::collections::BTreeMap;

use super::{run_one, Distance, SearchError, SearchResult, SearchStats};
use crate::index::BidirectionalIndex;
use crate::scheme::SearchScheme;

/// `s`-strata search: find the best error level `b` and report every
/// occurrence with at most `b + s` errors.
///
/// Levels `b = 0, 1, ..., K - s` are tried in turn with the scheme for `b`;
/// the first level with a hit triggers one search with the scheme for
/// `b + s`. If the best match lies above `K - s`, all occurrences with at
/// most `K` errors are reported.
pub fn search_strata(
    ix: &BidirectionalIndex,
    read: &[u8],
    schemes: &BTreeMap<u32, SearchScheme>,
    max_errors: u32,
    width: u32,
    distance: Distance,
) -> Result<SearchResult, SearchError> {
    if width > max_errors {
        return Err(SearchError::Stratum { width, max_errors });
    }
    let scheme = |k: u32| schemes.get(&k).ok_or(SearchError::MissingScheme(k));
    for k in 0..=max_errors {
        scheme(k)?;
    }

    let mut stats = SearchStats::default();
    for b in 0..=max_errors - width {
        let probe = run_one(ix, read, scheme(b)?, b, distance)?;
        stats.merge(&probe.stats);
        if probe.occurrences.is_empty() {
            continue;
        }
        let mut full = if width == 0 {
            probe
        } else {
            run_one(ix, read, scheme(b + width)?, b + width, distance)?
        };
        if width > 0 {
            stats.merge(&full.stats);
        }
        stats.reported = full.occurrences.len();
        full.stats = stats;
        return Ok(full);
    }
    let mut all = run_one(ix, read, scheme(max_errors)?, max_errors, distance)?;
    stats.merge(&all.stats);
    stats.reported = all.occurrences.len();
    all.stats = stats;
    Ok(all)
}
