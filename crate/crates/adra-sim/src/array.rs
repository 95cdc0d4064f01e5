//! Memory array core: geometry, biasing, and row activation.
//!
//! The array holds one `BitState` per cell. Activation drives one or two
//! wordlines and reports the resulting sense-line current per column; all
//! higher-level behavior (sensing, arithmetic) builds on those currents.

use std::ops::Range;

use crate::device::{BitState, DeviceParams};
use crate::error::{Error, Result};

/// Operating voltages for write and read/compute access (V).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BiasPlan {
    /// Bitline read voltage (V).
    pub v_read: f64,
    /// Reduced gate drive for the first operand row during dual-row
    /// activation (V). The asymmetry against `v_gread2` is what makes all
    /// four stored-bit combinations distinguishable on one sense line.
    pub v_gread1: f64,
    /// Full gate drive: standard reads and the second operand row (V).
    pub v_gread2: f64,
    /// Program pulse amplitude for the low-Vt state (V).
    pub v_set: f64,
    /// Erase pulse amplitude for the high-Vt state (V).
    pub v_reset: f64,
}

impl Default for BiasPlan {
    fn default() -> Self {
        BiasPlan {
            v_read: 1.0,
            v_gread1: 0.83,
            v_gread2: 1.0,
            v_set: 3.7,
            v_reset: -5.0,
        }
    }
}

impl BiasPlan {
    /// Checks voltage ordering. Equal gate read voltages pass here; that
    /// degenerate case collapses two sense levels and is reported by the
    /// reference-ladder margin check, which can name the colliding pair.
    pub fn validate(&self) -> Result<()> {
        if !(self.v_gread1 > 0.0 && self.v_gread2 >= self.v_gread1) {
            return Err(Error::InvalidParams {
                what: format!(
                    "gate read voltages must satisfy v_gread2 ({}) >= v_gread1 ({}) > 0",
                    self.v_gread2, self.v_gread1
                ),
            });
        }
        if !(self.v_gread2 < self.v_set) {
            return Err(Error::InvalidParams {
                what: format!(
                    "v_gread2 ({}) must stay below the program voltage v_set ({})",
                    self.v_gread2, self.v_set
                ),
            });
        }
        if !(self.v_read > 0.0) {
            return Err(Error::InvalidParams {
                what: format!("v_read ({}) must be positive", self.v_read),
            });
        }
        Ok(())
    }
}

/// How rows are driven during an access.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivationMode {
    /// One row at full gate drive.
    StandardRead,
    /// Two rows, both at full gate drive; the (0,1) and (1,0) operand
    /// vectors collapse onto one current level.
    SymmetricCim,
    /// Two rows at asymmetric gate drives; all four operand vectors map to
    /// distinct current levels.
    AdraCim,
}

/// Static shape of an array and its word layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArrayGeometry {
    pub rows: usize,
    pub cols: usize,
    /// Bits per stored word.
    pub word_width: usize,
    /// Words packed side by side along one row.
    pub words_per_row: usize,
    /// Column multiplexing ratio; must divide `cols`.
    pub mux_factor: usize,
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        ArrayGeometry {
            rows: 1024,
            cols: 1024,
            word_width: 32,
            words_per_row: 32,
            mux_factor: 1,
        }
    }
}

impl ArrayGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidParams {
                what: format!("array shape {}x{} must be nonzero", self.rows, self.cols),
            });
        }
        if self.word_width == 0 || self.words_per_row == 0 {
            return Err(Error::InvalidParams {
                what: "word_width and words_per_row must be at least 1".into(),
            });
        }
        if self.word_width * self.words_per_row > self.cols {
            return Err(Error::InvalidParams {
                what: format!(
                    "word layout {}x{} bits exceeds {} columns",
                    self.words_per_row, self.word_width, self.cols
                ),
            });
        }
        if self.mux_factor == 0 || !self.cols.is_multiple_of(self.mux_factor) {
            return Err(Error::InvalidParams {
                what: format!(
                    "mux_factor ({}) must be at least 1 and divide cols ({})",
                    self.mux_factor, self.cols
                ),
            });
        }
        Ok(())
    }
}

/// A populated array plus an access counter.
///
/// Operations mutate under exclusive access; read-only queries may run
/// concurrently on shared references.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryArray {
    geometry: ArrayGeometry,
    cells: Vec<BitState>,
    activations: u64,
}

impl MemoryArray {
    /// All cells start in the high-Vt (logic 0) state.
    pub fn new(geometry: ArrayGeometry) -> Result<Self> {
        geometry.validate()?;
        Ok(MemoryArray {
            geometry,
            cells: vec![BitState::Hrs; geometry.rows * geometry.cols],
            activations: 0,
        })
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    /// Dual-row activations performed so far.
    pub fn activation_count(&self) -> u64 {
        self.activations
    }

    fn index(&self, row: usize, col: usize) -> Result<usize> {
        if row >= self.geometry.rows || col >= self.geometry.cols {
            return Err(Error::OutOfRange {
                what: format!(
                    "cell ({row}, {col}) in a {}x{} array",
                    self.geometry.rows, self.geometry.cols
                ),
            });
        }
        Ok(row * self.geometry.cols + col)
    }

    pub fn cell(&self, row: usize, col: usize) -> Result<BitState> {
        Ok(self.cells[self.index(row, col)?])
    }

    pub fn set_cell(&mut self, row: usize, col: usize, state: BitState) -> Result<()> {
        let idx = self.index(row, col)?;
        self.cells[idx] = state;
        Ok(())
    }

    /// Writes a word with the least significant bit on the lowest column.
    ///
    /// Writing is an absolute state overwrite, so repeating a write leaves
    /// the array unchanged.
    pub fn write_word(&mut self, row: usize, word_index: usize, bits: &[bool]) -> Result<()> {
        if bits.len() != self.geometry.word_width {
            return Err(Error::InvalidParams {
                what: format!(
                    "word has {} bits but word_width is {}",
                    bits.len(),
                    self.geometry.word_width
                ),
            });
        }
        if word_index >= self.geometry.words_per_row {
            return Err(Error::OutOfRange {
                what: format!(
                    "word index {word_index} with {} words per row",
                    self.geometry.words_per_row
                ),
            });
        }
        let base = word_index * self.geometry.word_width;
        for (offset, bit) in bits.iter().enumerate() {
            self.set_cell(row, base + offset, BitState::from_bit(*bit))?;
        }
        Ok(())
    }

    /// Reads a stored word back, least significant bit first.
    pub fn word_bits(&self, row: usize, word_index: usize) -> Result<Vec<bool>> {
        if word_index >= self.geometry.words_per_row {
            return Err(Error::OutOfRange {
                what: format!(
                    "word index {word_index} with {} words per row",
                    self.geometry.words_per_row
                ),
            });
        }
        let base = word_index * self.geometry.word_width;
        (0..self.geometry.word_width)
            .map(|offset| Ok(self.cell(row, base + offset)?.to_bit()))
            .collect()
    }

    /// Drives the selected row(s) and returns each column's sense-line
    /// current (A). Counts as one activation.
    ///
    /// Currents superpose: with two rows active, each column carries the sum
    /// of its two cell currents.
    pub fn activate(
        &mut self,
        device: &DeviceParams,
        bias: &BiasPlan,
        mode: ActivationMode,
        row_a: usize,
        row_b: Option<usize>,
    ) -> Result<Vec<f64>> {
        device.validate()?;
        bias.validate()?;
        if row_a >= self.geometry.rows {
            return Err(Error::OutOfRange {
                what: format!("row {row_a} in a {}-row array", self.geometry.rows),
            });
        }
        let currents = match (mode, row_b) {
            (ActivationMode::StandardRead, None) => (0..self.geometry.cols)
                .map(|col| device.cell_current(self.cells[row_a * self.geometry.cols + col], bias.v_gread2))
                .collect(),
            (ActivationMode::StandardRead, Some(_)) => {
                return Err(Error::ModeMismatch {
                    what: "standard read drives a single row; row_b must be absent".into(),
                });
            }
            (ActivationMode::SymmetricCim, Some(rb)) | (ActivationMode::AdraCim, Some(rb)) => {
                if rb >= self.geometry.rows {
                    return Err(Error::OutOfRange {
                        what: format!("row {rb} in a {}-row array", self.geometry.rows),
                    });
                }
                if rb == row_a {
                    return Err(Error::ModeMismatch {
                        what: format!("dual-row activation needs two distinct rows, got {row_a} twice"),
                    });
                }
                let vg_a = match mode {
                    ActivationMode::AdraCim => bias.v_gread1,
                    _ => bias.v_gread2,
                };
                (0..self.geometry.cols)
                    .map(|col| {
                        let ia = device.cell_current(self.cells[row_a * self.geometry.cols + col], vg_a);
                        let ib = device.cell_current(self.cells[rb * self.geometry.cols + col], bias.v_gread2);
                        ia + ib
                    })
                    .collect()
            }
            (_, None) => {
                return Err(Error::ModeMismatch {
                    what: "dual-row activation needs row_b".into(),
                });
            }
        };
        self.activations += 1;
        Ok(currents)
    }

    /// Columns covered when a fraction `parallelism` of the words in a row
    /// take part in an operation. The fraction must land on a whole number
    /// of words.
    pub fn selected_columns(&self, parallelism: f64) -> Result<Range<usize>> {
        selected_columns(&self.geometry, parallelism)
    }

    /// Serializes the cell grid as one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.geometry.rows * (self.geometry.cols + 1));
        for row in 0..self.geometry.rows {
            for col in 0..self.geometry.cols {
                out.push(if self.cells[row * self.geometry.cols + col].to_bit() { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Rebuilds an array from `to_text` output; the grid must match the
    /// geometry exactly.
    pub fn from_text(geometry: ArrayGeometry, text: &str) -> Result<Self> {
        let mut array = MemoryArray::new(geometry)?;
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() != geometry.rows {
            return Err(Error::InvalidParams {
                what: format!("grid has {} lines, geometry expects {}", lines.len(), geometry.rows),
            });
        }
        for (row, line) in lines.iter().enumerate() {
            if line.chars().count() != geometry.cols {
                return Err(Error::InvalidParams {
                    what: format!(
                        "row {row} has {} characters, geometry expects {}",
                        line.chars().count(),
                        geometry.cols
                    ),
                });
            }
            for (col, ch) in line.chars().enumerate() {
                let state = match ch {
                    '0' => BitState::Hrs,
                    '1' => BitState::Lrs,
                    other => {
                        return Err(Error::InvalidParams {
                            what: format!("unexpected character {other:?} at row {row}, column {col}"),
                        });
                    }
                };
                array.set_cell(row, col, state)?;
            }
        }
        Ok(array)
    }
}

/// Free-function form of [`MemoryArray::selected_columns`] for callers that
/// only have a geometry.
pub fn selected_columns(geometry: &ArrayGeometry, parallelism: f64) -> Result<Range<usize>> {
    if !(parallelism > 0.0 && parallelism <= 1.0) {
        return Err(Error::InvalidParams {
            what: format!("parallelism ({parallelism}) must lie in (0, 1]"),
        });
    }
    let words_exact = parallelism * geometry.words_per_row as f64;
    let words = words_exact.round();
    if (words_exact - words).abs() > 1e-9 {
        return Err(Error::InvalidParams {
            what: format!(
                "parallelism {parallelism} selects {words_exact} of {} words; must be whole",
                geometry.words_per_row
            ),
        });
    }
    Ok(0..(words as usize) * geometry.word_width)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_geometry() -> ArrayGeometry {
        ArrayGeometry { rows: 4, cols: 8, word_width: 3, words_per_row: 2, mux_factor: 1 }
    }

    #[test]
    fn write_places_lsb_on_lowest_column() {
        let mut array = MemoryArray::new(small_geometry()).unwrap();
        // 0b101 -> bit 0 = 1, bit 1 = 0, bit 2 = 1.
        array.write_word(0, 0, &[true, false, true]).unwrap();
        assert_eq!(array.cell(0, 0).unwrap(), BitState::Lrs);
        assert_eq!(array.cell(0, 1).unwrap(), BitState::Hrs);
        assert_eq!(array.cell(0, 2).unwrap(), BitState::Lrs);
        // Neighboring word untouched.
        assert_eq!(array.cell(0, 3).unwrap(), BitState::Hrs);
        assert_eq!(array.word_bits(0, 0).unwrap(), vec![true, false, true]);
    }

    #[test]
    fn rewriting_the_same_word_is_idempotent() {
        let mut array = MemoryArray::new(small_geometry()).unwrap();
        array.write_word(1, 1, &[false, true, true]).unwrap();
        let snapshot = array.clone();
        array.write_word(1, 1, &[false, true, true]).unwrap();
        assert_eq!(array.cells, snapshot.cells);
    }

    #[test]
    fn bounds_and_shape_errors() {
        let mut array = MemoryArray::new(small_geometry()).unwrap();
        assert!(matches!(array.cell(4, 0), Err(Error::OutOfRange { .. })));
        assert!(matches!(array.cell(0, 8), Err(Error::OutOfRange { .. })));
        assert!(array.write_word(0, 2, &[true, true, true]).is_err());
        assert!(array.write_word(0, 0, &[true, true]).is_err());

        let bad = ArrayGeometry { rows: 2, cols: 4, word_width: 3, words_per_row: 2, mux_factor: 1 };
        assert!(MemoryArray::new(bad).is_err());
        let bad_mux = ArrayGeometry { mux_factor: 3, ..ArrayGeometry::default() };
        assert!(bad_mux.validate().is_err());
    }

    /// Writes the four operand vectors into columns 0..4 of two rows and
    /// returns the activation currents for those columns.
    fn four_vector_currents(mode: ActivationMode) -> Vec<f64> {
        let geometry = ArrayGeometry { rows: 2, cols: 4, word_width: 4, words_per_row: 1, mux_factor: 1 };
        let mut array = MemoryArray::new(geometry).unwrap();
        // Column k holds (a, b) = (k & 1, k >> 1).
        array.write_word(0, 0, &[false, true, false, true]).unwrap();
        array.write_word(1, 0, &[false, false, true, true]).unwrap();
        let device = DeviceParams::default();
        let bias = BiasPlan::default();
        array.activate(&device, &bias, mode, 0, Some(1)).unwrap()
    }

    #[test]
    fn asymmetric_activation_separates_all_four_vectors() {
        let i = four_vector_currents(ActivationMode::AdraCim);
        let ua = 1.0e-6;
        assert!((i[0] - 0.10 * ua).abs() < 1e-12);
        assert!((i[1] - 6.989 * ua).abs() < 1e-12);
        assert!((i[2] - 10.10 * ua).abs() < 1e-12);
        assert!((i[3] - 16.989 * ua).abs() < 1e-12);
        // Strict ordering with at least 1 uA between neighbors.
        for pair in i.windows(2) {
            assert!(pair[1] - pair[0] > 1.0e-6);
        }
    }

    #[test]
    fn symmetric_activation_collapses_mixed_vectors() {
        let i = four_vector_currents(ActivationMode::SymmetricCim);
        assert_eq!(i[1], i[2], "(1,0) and (0,1) must collide exactly");
        assert!(i[0] < i[1] && i[2] < i[3]);
        let distinct = {
            let mut v = i.clone();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v.len()
        };
        assert_eq!(distinct, 3);
    }

    #[test]
    fn dual_row_current_is_the_sum_of_cell_currents() {
        let device = DeviceParams::default();
        let bias = BiasPlan::default();
        let i = four_vector_currents(ActivationMode::AdraCim);
        let states = [
            (BitState::Hrs, BitState::Hrs),
            (BitState::Lrs, BitState::Hrs),
            (BitState::Hrs, BitState::Lrs),
            (BitState::Lrs, BitState::Lrs),
        ];
        for (col, (sa, sb)) in states.iter().enumerate() {
            let expected =
                device.cell_current(*sa, bias.v_gread1) + device.cell_current(*sb, bias.v_gread2);
            assert_eq!(i[col], expected, "superposition failed on column {col}");
        }
    }

    #[test]
    fn activation_mode_operand_mismatches_are_rejected() {
        let mut array = MemoryArray::new(small_geometry()).unwrap();
        let device = DeviceParams::default();
        let bias = BiasPlan::default();
        let read = array.activate(&device, &bias, ActivationMode::StandardRead, 0, None);
        assert!(read.is_ok());
        assert!(array
            .activate(&device, &bias, ActivationMode::StandardRead, 0, Some(1))
            .is_err());
        assert!(array.activate(&device, &bias, ActivationMode::AdraCim, 0, None).is_err());
        assert!(array.activate(&device, &bias, ActivationMode::AdraCim, 2, Some(2)).is_err());
        assert!(array.activate(&device, &bias, ActivationMode::AdraCim, 0, Some(9)).is_err());
        assert!(array.activate(&device, &bias, ActivationMode::AdraCim, 9, Some(0)).is_err());
    }

    #[test]
    fn activation_counter_tracks_each_access() {
        let mut array = MemoryArray::new(small_geometry()).unwrap();
        let device = DeviceParams::default();
        let bias = BiasPlan::default();
        assert_eq!(array.activation_count(), 0);
        array.activate(&device, &bias, ActivationMode::StandardRead, 0, None).unwrap();
        array.activate(&device, &bias, ActivationMode::AdraCim, 0, Some(1)).unwrap();
        assert_eq!(array.activation_count(), 2);
        // Failed activations do not count.
        let _ = array.activate(&device, &bias, ActivationMode::AdraCim, 0, None);
        assert_eq!(array.activation_count(), 2);
    }

    #[test]
    fn selected_columns_requires_a_whole_word_count() {
        let array = MemoryArray::new(small_geometry()).unwrap();
        assert_eq!(array.selected_columns(1.0).unwrap(), 0..6);
        assert_eq!(array.selected_columns(0.5).unwrap(), 0..3);
        assert!(array.selected_columns(0.3).is_err());
        assert!(array.selected_columns(0.0).is_err());
        assert!(array.selected_columns(1.5).is_err());

        let wide = ArrayGeometry::default();
        assert_eq!(selected_columns(&wide, 0.25).unwrap(), 0..256);
    }

    #[test]
    fn text_grid_round_trips_and_rejects_malformed_input() {
        let mut array = MemoryArray::new(small_geometry()).unwrap();
        array.write_word(0, 0, &[true, false, true]).unwrap();
        array.write_word(3, 1, &[true, true, false]).unwrap();
        let text = array.to_text();
        let restored = MemoryArray::from_text(small_geometry(), &text).unwrap();
        assert_eq!(restored.cells, array.cells);
        assert_eq!(restored.to_text(), text);

        assert!(MemoryArray::from_text(small_geometry(), "0101\n").is_err());
        let short_row = "00000000\n00000000\n00000000\n0000000\n";
        assert!(MemoryArray::from_text(small_geometry(), short_row).is_err());
        let bad_char = text.replacen('0', "x", 1);
        assert!(MemoryArray::from_text(small_geometry(), &bad_char).is_err());
    }
}
