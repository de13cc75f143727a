//! Readability formulas over [`TextStatistics`]: Flesch Reading Ease,
//! Flesch-Kincaid grade, SMOG, and the Automated Readability Index, plus
//! the conventional interpretation bands for FRE and SMOG.
//!
//! Scores are computed for whole documents, not averaged per sentence. A
//! document with zero words or zero sentences has no defined score and every
//! function here reports that as an error instead of dividing by zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{from_count, real, Real};
use crate::textstats::TextStatistics;

/// Raised when a score is requested for a degenerate document.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReadabilityError {
    #[error("readability undefined: document has no sentences")]
    NoSentences,
    #[error("readability undefined: document has no words")]
    NoWords,
}

/// Flesch Reading Ease interpretation band.
///
/// Boundary scores map to the easier band: 90 is `VeryEasy`, 30 is
/// `Difficult`. Scores outside 0-100 clamp into the outer bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreBand {
    VeryEasy,
    Easy,
    FairlyEasy,
    Standard,
    FairlyDifficult,
    Difficult,
    VeryDifficult,
}

impl FreBand {
    pub fn from_score<F: Real>(score: F) -> FreBand {
        if score >= real(90.0) {
            FreBand::VeryEasy
        } else if score >= real(80.0) {
            FreBand::Easy
        } else if score >= real(70.0) {
            FreBand::FairlyEasy
        } else if score >= real(60.0) {
            FreBand::Standard
        } else if score >= real(50.0) {
            FreBand::FairlyDifficult
        } else if score >= real(30.0) {
            FreBand::Difficult
        } else {
            FreBand::VeryDifficult
        }
    }

    /// School level conventionally associated with the band.
    pub fn grade_level(&self) -> &'static str {
        match self {
            FreBand::VeryEasy => "4th grade",
            FreBand::Easy => "5th grade",
            FreBand::FairlyEasy => "6th grade",
            FreBand::Standard => "7th to 8th grade",
            FreBand::FairlyDifficult => "some high school",
            FreBand::Difficult => "high school or some college",
            FreBand::VeryDifficult => "college graduate",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FreBand::VeryEasy => "very easy",
            FreBand::Easy => "easy",
            FreBand::FairlyEasy => "fairly easy",
            FreBand::Standard => "standard",
            FreBand::FairlyDifficult => "fairly difficult",
            FreBand::Difficult => "difficult",
            FreBand::VeryDifficult => "very difficult",
        }
    }
}

impl std::fmt::Display for FreBand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Education level implied by a SMOG grade.
///
/// Bands are half-open: a grade of exactly 7 is `JuniorHighSchool`, 19 and
/// above is `PostGraduateDegree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmogBand {
    #[serde(rename = "low-literate")]
    LowLiterate,
    #[serde(rename = "junior high school")]
    JuniorHighSchool,
    #[serde(rename = "some high school")]
    SomeHighSchool,
    #[serde(rename = "high school graduate")]
    HighSchoolGraduate,
    #[serde(rename = "some college")]
    SomeCollege,
    #[serde(rename = "university degree")]
    UniversityDegree,
    #[serde(rename = "post-graduate studies")]
    PostGraduateStudies,
    #[serde(rename = "post-graduate degree")]
    PostGraduateDegree,
}

impl SmogBand {
    pub fn from_grade<F: Real>(grade: F) -> SmogBand {
        if grade >= real(19.0) {
            SmogBand::PostGraduateDegree
        } else if grade >= real(17.0) {
            SmogBand::PostGraduateStudies
        } else if grade >= real(16.0) {
            SmogBand::UniversityDegree
        } else if grade >= real(13.0) {
            SmogBand::SomeCollege
        } else if grade >= real(12.0) {
            SmogBand::HighSchoolGraduate
        } else if grade >= real(9.0) {
            SmogBand::SomeHighSchool
        } else if grade >= real(7.0) {
            SmogBand::JuniorHighSchool
        } else {
            SmogBand::LowLiterate
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SmogBand::LowLiterate => "low-literate",
            SmogBand::JuniorHighSchool => "junior high school",
            SmogBand::SomeHighSchool => "some high school",
            SmogBand::HighSchoolGraduate => "high school graduate",
            SmogBand::SomeCollege => "some college",
            SmogBand::UniversityDegree => "university degree",
            SmogBand::PostGraduateStudies => "post-graduate studies",
            SmogBand::PostGraduateDegree => "post-graduate degree",
        }
    }
}

impl std::fmt::Display for SmogBand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn require_sentences<F: Real>(stats: &TextStatistics<F>) -> Result<(), ReadabilityError> {
    if stats.sentence_count == 0 {
        Err(ReadabilityError::NoSentences)
    } else {
        Ok(())
    }
}

fn require_words<F: Real>(stats: &TextStatistics<F>) -> Result<(), ReadabilityError> {
    if stats.word_count == 0 {
        Err(ReadabilityError::NoWords)
    } else {
        Ok(())
    }
}

/// Flesch Reading Ease: `206.835 - 1.015*ASL - 84.6*ASW`. Higher is easier.
pub fn flesch_reading_ease<F: Real>(stats: &TextStatistics<F>) -> Result<F, ReadabilityError> {
    require_sentences(stats)?;
    require_words(stats)?;
    Ok(real::<F>(206.835) - real::<F>(1.015) * stats.asl - real::<F>(84.6) * stats.asw)
}

/// Flesch-Kincaid grade level: `0.39*ASL + 11.8*ASW - 15.59`.
pub fn flesch_kincaid_grade<F: Real>(stats: &TextStatistics<F>) -> Result<F, ReadabilityError> {
    require_sentences(stats)?;
    require_words(stats)?;
    Ok(real::<F>(0.39) * stats.asl + real::<F>(11.8) * stats.asw - real::<F>(15.59))
}

/// SMOG grade: `sqrt(polysyllables * 30 / sentences) + 3`.
///
/// Only needs a sentence count; a document with no polysyllabic words
/// scores exactly 3.
pub fn smog_index<F: Real>(stats: &TextStatistics<F>) -> Result<F, ReadabilityError> {
    require_sentences(stats)?;
    let scaled = from_count::<F>(stats.complex_word_count) * real(30.0)
        / from_count(stats.sentence_count);
    Ok(scaled.sqrt() + real(3.0))
}

/// Automated Readability Index: `0.5*ASL + 4.71*ALW - 21.43`.
pub fn automated_readability_index<F: Real>(
    stats: &TextStatistics<F>,
) -> Result<F, ReadabilityError> {
    require_sentences(stats)?;
    require_words(stats)?;
    Ok(real::<F>(0.5) * stats.asl + real::<F>(4.71) * stats.alw - real::<F>(21.43))
}

/// All four scores plus interpretation bands for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityReport<F> {
    pub fre: F,
    pub fre_band: FreBand,
    pub fkg: F,
    pub smog: F,
    pub smog_band: SmogBand,
    pub ari: F,
}

/// Scores a document on every metric at once.
pub fn readability_report<F: Real>(
    stats: &TextStatistics<F>,
) -> Result<ReadabilityReport<F>, ReadabilityError> {
    let fre = flesch_reading_ease(stats)?;
    let fkg = flesch_kincaid_grade(stats)?;
    let smog = smog_index(stats)?;
    let ari = automated_readability_index(stats)?;
    Ok(ReadabilityReport {
        fre,
        fre_band: FreBand::from_score(fre),
        fkg,
        smog,
        smog_band: SmogBand::from_grade(smog),
        ari,
    })
}
