"""How the four indicators slice one researcher's publication record.

A researcher with an older consolidated line and a recent pivot produces very
different publication sets per indicator, which is exactly why the engine
keeps the rankings separate instead of fusing them.
"""
from fundmatch.profiling import build_set, default_indicators
from fundmatch.records import AuthorSlot, PublicationRecord, ResearcherProfile
from fundmatch.scoring import top_k_for


def pub(pub_id, year, position, n_authors, corresponding=False):
    slots = [
        AuthorSlot(source_author_id=f"CO{i}", position=i) for i in range(1, n_authors + 1)
    ]
    slots[position - 1] = AuthorSlot("ME", position, corresponding)
    return PublicationRecord(
        pub_id=pub_id, title=f"work {pub_id}", authors=slots, year=year
    )


career = [
    pub("P01", 2021, 1, 3),                 # led, old line
    pub("P02", 2021, 2, 4),                 # middle author
    pub("P03", 2022, 1, 2),                 # led
    pub("P04", 2022, 4, 4, corresponding=True),
    pub("P05", 2023, 2, 3),
    pub("P06", 2023, 3, 3),                 # last author -> leading
    pub("P07", 2024, 1, 1),                 # recent pivot, sole author
    pub("P08", 2024, 2, 5),
    pub("P09", 2025, 1, 2),
    pub("P10", 2025, 3, 4),                 # middle, not corresponding
]
pubs = {p.pub_id: p for p in career}
me = ResearcherProfile(
    researcher_id="DEMO", merged_source_ids={"ME"}, publication_ids=set(pubs)
)

print(f"career: {len(career)} publications, 2021-2025\n")
header = f"{'indicator':<22} {'window':>6} {'filter':>8} {'set':>4} {'eligible':>9}  aggregation"
print(header)
print("-" * len(header))
for spec in default_indicators():
    pset = build_set(me, spec, pubs, reference_year=2025)
    if pset.pub_ids:
        rule, k = top_k_for(len(pset.pub_ids))
        agg = f"{rule} (k={k})"
    else:
        agg = "-"
    print(
        f"{spec.name:<22} {spec.window_years:>5}y {spec.author_filter:>8} "
        f"{len(pset.pub_ids):>4} {str(pset.eligible):>9}  {agg}"
    )

print("\nsets per indicator:")
for spec in default_indicators():
    pset = build_set(me, spec, pubs, reference_year=2025)
    print(f"  {spec.name:<22} {pset.pub_ids}")
