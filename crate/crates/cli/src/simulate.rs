use dyncorr::SimDesign;

use crate::error::CliResult;
use crate::table::{fmt_num, write_csv};
use crate::SimulateArgs;

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    let design = SimDesign::named(args.design, args.dist, args.t_len, args.seed)?;
    let series = design.generate::<f64>()?;
    let (x1, x2) = (series.first().values(), series.second().values());
    let header = ["t", "x1", "x2", "p_true"].map(String::from);
    let rows = (0..design.t_len).map(|i| {
        let t = i + 1;
        vec![
            t.to_string(),
            fmt_num(x1[i]),
            fmt_num(x2[i]),
            fmt_num(design.profile.eval(t)),
        ]
    });
    write_csv(&args.out, &header, rows)
}
