pub fn simulate_script() -> String {
    r#"import csv
import matplotlib.pyplot as plt

with open("trajectory.csv") as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
fig, (ax_f, ax_p) = plt.subplots(2, 1, sharex=True)
ax_f.plot(t, [float(r["F"]) for r in rows])
ax_f.set_ylabel("fidelity")
for key in rows[0]:
    if key.startswith("pop_"):
        ax_p.plot(t, [float(r[key]) for r in rows], label=key[4:])
ax_p.set_xlabel("t (us)")
ax_p.set_ylabel("population")
ax_p.legend()
fig.savefig("trajectory.png", dpi=150)
"#
    .to_string()
}

pub fn campaign_script(names: &[&str]) -> String {
    let list = names.iter().map(|n| format!("{n:?}")).collect::<Vec<_>>().join(", ");
    format!(
        r#"import csv
import matplotlib.pyplot as plt

for name in [{list}]:
    with open(name + ".csv") as fh:
        rows = list(csv.DictReader(fh))
    x = [float(r["grid_value"]) for r in rows]
    y = [float(r["mean_error"]) for r in rows]
    e = [float(r["std_error"]) for r in rows]
    fig, ax = plt.subplots()
    ax.errorbar(x, y, yerr=e, marker="o")
    if all(v > 0 for v in y):
        ax.set_yscale("log")
    ax.set_xlabel("grid value")
    ax.set_ylabel("error")
    ax.set_title(name)
    fig.savefig(name + ".png", dpi=150)
"#
    )
}
