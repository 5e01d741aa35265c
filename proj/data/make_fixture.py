"""Regenerates fixture30.csv. Deterministic: fixed seed, no external inputs."""
import csv
import random

rng = random.Random(20180101)

REFS = {
    "bank": [
        "Laeven, L., & Levine, R. (2009). Bank governance, regulation and risk taking. Journal of Financial Economics, 93(2), 259-275",
        "Beltratti, A., & Stulz, R. M. (2012). The credit crisis around the globe. Journal of Financial Economics, 105(1), 1-17",
        "Pathan, S. (2009). Strong boards, CEO power and bank risk-taking. Journal of Banking and Finance, 33(7), 1340-1350",
        "Adams, R. B., & Mehran, H. (2012). Bank board structure and performance. Journal of Financial Intermediation, 21(2), 243-267",
        "Erkens, D. H., Hung, M., & Matos, P. (2012). Corporate governance in the 2007-2008 financial crisis. Journal of Corporate Finance, 18(2), 389-411",
        "Aebi, V., Sabato, G., & Schmid, M. (2012). Risk management, corporate governance, and bank performance. Journal of Banking and Finance, 36(12), 3213-3226",
    ],
    "security": [
        "Webber, M., Croft, S., Howorth, J., Terriff, T., & Krahmann, E. (2004). The governance of European security. Review of International Studies, 30(1), 3-26",
        "Krahmann, E. (2003). Conceptualizing security governance. Cooperation and Conflict, 38(1), 5-26",
        "Kirchner, E. J. (2006). The challenge of European Union security governance. Journal of Common Market Studies, 44(5), 947-968",
        "Sperling, J. (2009). Security governance in a Westphalian world. European Security, 18(1), 1-10",
        "Abrahamsen, R., & Williams, M. C. (2009). Security beyond the state. International Political Sociology, 3(1), 1-17",
    ],
    "competition": [
        "Giroud, X., & Mueller, H. M. (2010). Does corporate governance matter in competitive industries? Journal of Financial Economics, 95(3), 312-331",
        "Giroud, X., & Mueller, H. M. (2011). Corporate governance, product market competition, and equity prices. Journal of Finance, 66(2), 563-600",
        "Chhaochharia, V., Grinstein, Y., Grullon, G., & Michaely, R. (2017). Product market competition and internal governance. Management Science, 63(5), 1405-1424",
        "Allen, F., & Gale, D. (2000). Corporate governance and competition. In Corporate governance: Theoretical and empirical perspectives, 23-94",
        "Ammann, M., Oesch, D., & Schmid, M. M. (2013). Product market competition, corporate governance, and firm value. Journal of Empirical Finance, 20, 40-55",
    ],
    "shared": [
        "Jensen, M. C., & Meckling, W. H. (1976). Theory of the firm: Managerial behavior, agency costs and ownership structure. Journal of Financial Economics, 3(4), 305-360",
        "Shleifer, A., & Vishny, R. W. (1997). A survey of corporate governance. Journal of Finance, 52(2), 737-783",
    ],
}

KEYWORDS = {
    "bank": ["bank governance", "risk taking", "financial crisis", "board structure", "risk management", "regulation"],
    "security": ["security governance", "european union", "security", "international cooperation", "nato", "private security"],
    "competition": ["product market competition", "corporate governance", "firm value", "competition", "takeover", "agency costs"],
}

TITLES = {
    "bank": [
        "Bank governance and risk taking after the crisis",
        "Board independence, governance and bank risk",
        "Risk governance in European banks",
        "Ownership structure, governance and risk in banking",
        "Governance of systemic risk: evidence from bank boards",
        "Executive pay, governance and risk in financial institutions",
        "Risk committees and bank governance quality",
        "Governance failures and risk exposure of savings banks",
        "Governance, risk disclosure and bank valuation",
        "Central bank governance and financial risk",
    ],
    "security": [
        "The governance of European security after enlargement",
        "Security governance and regional cooperation in Southeast Asia",
        "Private military companies and security governance",
        "Cooperation in maritime security governance",
        "Cyber security governance in the public sector",
        "Governance of energy security in the European Union",
        "Transatlantic security cooperation and governance networks",
        "Security governance of international borders",
        "Food security governance and cooperation",
    ],
    "competition": [
        "Product market competition and corporate governance",
        "Competition, governance and firm performance in emerging markets",
        "Governance and competition in the airline industry",
        "Corporate governance, competition and innovation",
        "Does competition substitute for governance?",
        "Market competition and governance of state-owned firms",
        "Governance mechanisms under import competition",
        "Competition policy and the governance of utilities",
    ],
}

COUNTRIES = {
    "bank": [("University of Zurich", "Switzerland"), ("Bocconi University", "Italy"), ("University of Queensland", "Australia"), ("Federal Reserve Bank of New York", "United States")],
    "security": [("University of Birmingham", "United Kingdom"), ("University of Essex", "United Kingdom"), ("Indiana University", "United States"), ("University of Copenhagen", "Denmark")],
    "competition": [("MIT Sloan School of Management", "United States"), ("New York University", "United States"), ("University of St. Gallen", "Switzerland"), ("Tel Aviv University", "Israel")],
}

SURNAMES = ["Smith", "Garcia", "Müller", "Rossi", "Chen", "Kowalski", "Nakamura", "Dubois", "Olsen", "Silva", "Novak", "Kim"]
SOURCES = {"bank": "Journal of Banking and Finance", "security": "European Security", "competition": "Journal of Corporate Finance"}

rows = []
topics = ["bank"] * 10 + ["security"] * 9 + ["competition"] * 8
for i, topic in enumerate(topics):
    title = TITLES[topic][sum(1 for t in topics[:i] if t == topic)]
    year = 1998 + (i * 5) % 21
    pool = REFS[topic]
    refs = rng.sample(pool, rng.randint(2, min(4, len(pool))))
    if rng.random() < 0.35:
        refs.append(rng.choice(REFS["shared"]))
    kws = rng.sample(KEYWORDS[topic], 3)
    authors = rng.sample(SURNAMES, rng.randint(1, 3))
    author_cell = "; ".join(f"{a} {chr(65 + rng.randint(0, 25))}." for a in authors)
    inst, country = rng.choice(COUNTRIES[topic])
    affil = f"Department of Economics, {inst}, {country}"
    if rng.random() < 0.3:
        inst2, country2 = rng.choice(COUNTRIES[rng.choice(list(COUNTRIES))])
        affil += f"; {inst2}, {country2}"
    doi = f"10.1016/j.fixture.{year}.{i + 1:03d}"
    rows.append({
        "Authors": author_cell, "Title": title, "Year": str(year),
        "Author Keywords": "; ".join(kws), "Affiliations": affil,
        "References": "; ".join(refs), "Source title": SOURCES[topic], "DOI": doi,
        "EID": f"2-s2.0-{85000000000 + i * 7919}",
    })

# Duplicate of an earlier record under a different EID (same DOI, upper-case URL form).
dup = dict(rows[3])
dup["EID"] = "2-s2.0-85999999999"
dup["DOI"] = "https://doi.org/" + rows[3]["DOI"].upper()
rows.append(dup)
# Two records the title query rejects.
rows.append({"Authors": "Brown K.", "Title": "Corporate governance and dividend policy", "Year": "2006",
             "Author Keywords": "dividends; corporate governance", "Affiliations": "University of Leeds, United Kingdom",
             "References": REFS["shared"][0], "Source title": "Journal of Corporate Finance",
             "DOI": "10.1016/j.fixture.2006.900", "EID": "2-s2.0-85000900000"})
rows.append({"Authors": "Ivanova P.", "Title": "Risk perception in supply chains", "Year": "2011",
             "Author Keywords": "supply chain; risk", "Affiliations": "Lomonosov Moscow State University, Russia",
             "References": REFS["bank"][0], "Source title": "International Journal of Production Economics",
             "DOI": "10.1016/j.fixture.2011.901", "EID": "2-s2.0-85000901000"})

header = ["Authors", "Title", "Year", "Author Keywords", "Affiliations", "References", "Source title", "DOI", "EID"]
with open("fixture30.csv", "w", newline="", encoding="utf-8") as f:
    w = csv.DictWriter(f, fieldnames=header, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
