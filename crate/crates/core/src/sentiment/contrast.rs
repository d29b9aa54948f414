use serde::{Deserialize, Serialize};

use super::{Analyzer, Channel, ScoreKey, SentimentError, SentimentScores};

/// Scores every width-3 window (stride 1) of the tweet. Tweets shorter than
/// three tokens get one window over the whole tweet; an empty tweet gets a
/// single all-zero score.
pub fn trigram_scores<A: Analyzer + ?Sized>(
    tokens: &[&str],
    analyzer: &A,
    key: &ScoreKey<'_>,
) -> Result<Vec<SentimentScores>, SentimentError> {
    if tokens.is_empty() {
        return Ok(vec![SentimentScores::zero(analyzer.id())]);
    }
    let windows: Vec<&[&str]> = if tokens.len() < 3 {
        vec![tokens]
    } else {
        tokens.windows(3).collect()
    };
    windows
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            let key = ScoreKey {
                trigram_index: Some(i),
                ..*key
            };
            analyzer.analyze(&w.join(" "), &key)
        })
        .collect()
}

/// max - min of one channel over the windows (0 for no windows).
pub fn contrast(scores: &[SentimentScores], channel: Channel) -> f64 {
    let mut values = scores.iter().map(|s| s.channel(channel));
    let Some(first) = values.next() else {
        return 0.0;
    };
    let (lo, hi) = values.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

/// Population standard deviation; 0 for an empty or constant slice.
pub fn population_std(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return 0.0;
    };
    if values.iter().all(|&v| v == first) {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt()
}

/// Spread of an author's per-tweet contrast values.
pub fn contrast_std(contrasts: &[f64]) -> f64 {
    population_std(contrasts)
}

/// Spread of an author's raw per-tweet scores on one channel.
pub fn channel_std(scores: &[SentimentScores], channel: Channel) -> f64 {
    let values: Vec<f64> = scores.iter().map(|s| s.channel(channel)).collect();
    population_std(&values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub mean: f64,
    pub sd: f64,
}

impl ChannelStats {
    fn fit(values: impl Iterator<Item = f64>) -> ChannelStats {
        let values: Vec<f64> = values.collect();
        if values.is_empty() {
            return ChannelStats { mean: 0.0, sd: 0.0 };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        ChannelStats {
            mean,
            sd: population_std(&values),
        }
    }

    /// Standard score; defined as 0 when the spread is (numerically) 0.
    pub fn z(&self, value: f64) -> f64 {
        if self.sd > 1e-12 {
            (value - self.mean) / self.sd
        } else {
            0.0
        }
    }
}

/// Per-analyzer, per-channel standardization stats (channel order pos, neg, neu).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisagreementStats {
    pub first: [ChannelStats; 3],
    pub second: [ChannelStats; 3],
}

impl DisagreementStats {
    /// Fits on paired scores of the same texts (training tweets only).
    pub fn fit(pairs: &[(SentimentScores, SentimentScores)]) -> DisagreementStats {
        let fit_side = |pick: fn(&(SentimentScores, SentimentScores)) -> &SentimentScores| {
            Channel::ALL.map(|c| ChannelStats::fit(pairs.iter().map(|p| pick(p).channel(c))))
        };
        DisagreementStats {
            first: fit_side(|p| &p.0),
            second: fit_side(|p| &p.1),
        }
    }

    pub fn swapped(&self) -> DisagreementStats {
        DisagreementStats {
            first: self.second,
            second: self.first,
        }
    }
}

/// Squared distance between the two analyzers' standardized scores on one channel.
pub fn disagreement(
    first: &SentimentScores,
    second: &SentimentScores,
    channel: Channel,
    stats: Option<&DisagreementStats>,
) -> Result<f64, SentimentError> {
    let stats = stats.ok_or(SentimentError::StatsNotFitted)?;
    let slot = channel.slot();
    let za = stats.first[slot].z(first.channel(channel));
    let zb = stats.second[slot].z(second.channel(channel));
    Ok((za - zb) * (za - zb))
}
