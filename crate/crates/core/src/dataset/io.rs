use std::fs;
use std::path::Path;

use super::{chronological_split, FeatureCatalog, InteractionDataset, InteractionRecord};
use crate::error::{Error, Result};

const FIXED_COLUMNS: [&str; 3] = ["user", "item", "label"];

/// Reads a `user,item,label,<features...>` CSV plus its catalog file.
///
/// File order is taken as chronological order. Feature columns are
/// standardized with statistics of the training range of the
/// chronological split; files too small to split are left as read.
pub fn load_csv(path: &Path, catalog_path: &Path) -> Result<InteractionDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    for (k, want) in FIXED_COLUMNS.iter().enumerate() {
        match header.get(k) {
            Some(h) if h == *want => {}
            Some(h) => return Err(Error::Dataset(format!("column {k} of header is {h:?}, expected {want:?}"))),
            None => return Err(Error::Dataset(format!("missing column {want:?}"))),
        }
    }
    let feature_names: Vec<String> = header.iter().skip(3).map(str::to_owned).collect();
    if feature_names.is_empty() {
        return Err(Error::Dataset("no feature columns after user,item,label".into()));
    }

    let catalog_text = fs::read_to_string(catalog_path).map_err(|e| Error::io(catalog_path, e))?;
    let catalog = FeatureCatalog::parse(&catalog_text, &feature_names)?;

    let mut records = Vec::new();
    let (mut n_users, mut n_items) = (0, 0);
    for (k, row) in reader.records().enumerate() {
        let row_no = k + 1;
        let row = row.map_err(|e| csv_error(path, e))?;
        if row.len() != header.len() {
            return Err(Error::Dataset(format!("row {row_no} has {} fields, header has {}", row.len(), header.len())));
        }
        let int = |idx: usize| -> Result<usize> {
            row[idx].parse::<usize>().map_err(|_| {
                Error::Dataset(format!(
                    "row {row_no}: column {:?} is not a non-negative integer: {:?}",
                    &header[idx], &row[idx]
                ))
            })
        };
        let user_id = int(0)?;
        let item_id = int(1)?;
        let label = match &row[2] {
            "0" => 0,
            "1" => 1,
            _ => return Err(Error::Dataset(format!("non-binary label at row {row_no}"))),
        };
        let context = (3..row.len())
            .map(|idx| {
                row[idx].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    Error::Dataset(format!(
                        "row {row_no}: column {:?} is not a finite number: {:?}",
                        &header[idx], &row[idx]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        n_users = n_users.max(user_id + 1);
        n_items = n_items.max(item_id + 1);
        records.push(InteractionRecord { user_id, item_id, context, label, timestamp_rank: k });
    }

    let mut ds = InteractionDataset::new(records, catalog, n_users, n_items)?;
    // Too small to split: returned unstandardized, and any later split fails.
    if let Ok(split) = chronological_split(&ds) {
        ds.standardize(split.train);
    }
    Ok(ds)
}

/// Writes the dataset in the format read by [`load_csv`]. Feature columns
/// are named `f0`, `f1`, ...
pub fn write_csv(ds: &InteractionDataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend((0..ds.n_features()).map(|j| format!("f{j}")));
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    let mut fields = Vec::with_capacity(header.len());
    for r in ds.records() {
        fields.clear();
        fields.push(r.user_id.to_string());
        fields.push(r.item_id.to_string());
        fields.push(r.label.to_string());
        fields.extend(r.context.iter().map(|x| x.to_string()));
        w.write_record(&fields).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_catalog(catalog: &FeatureCatalog, path: &Path) -> Result<()> {
    fs::write(path, catalog.to_text()).map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        },
        _ => Error::Parse(format!("{}: {e}", path.display())),
    }
}
