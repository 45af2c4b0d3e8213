#!/usr/bin/env python3
"""Regenerates the checked-in test fixtures under tests/fixtures.

Output is fully determined by this script; rerunning it must not change any
file. The bench golden report is produced separately by the seoaudit binary
(see tests/fixtures/bench/README.md).
"""

import json
import pathlib
import shutil

ROOT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"

TOPICS = {
    "news": [
        "The city council approved the new budget after a long public meeting.",
        "Reporters covered the election results from every district overnight.",
        "Officials announced road closures ahead of the weekend parade.",
        "The mayor answered questions about housing and public transport.",
        "A local newspaper published an investigation into water quality.",
        "Witnesses described the storm damage along the coastal highway.",
    ],
    "sports": [
        "The home team won the championship final after extra time.",
        "Coaches praised the defence for a strong second half performance.",
        "The marathon attracted thousands of runners from across the region.",
        "Fans celebrated the league title with a parade through downtown.",
        "The striker scored twice and was named player of the match.",
        "Training camp opens next week with several new signings.",
    ],
    "technology": [
        "The new laptop ships with a faster processor and longer battery life.",
        "Developers released an open source framework for mobile applications.",
        "The software update fixes security flaws in the wireless driver.",
        "Engineers benchmarked the database on commodity cloud servers.",
        "The smartphone camera improves low light photography noticeably.",
        "A programming tutorial explains compilers, parsers and syntax trees.",
    ],
    "health": [
        "Doctors recommend regular exercise and a balanced diet for heart health.",
        "The clinic offers free vaccinations for children this month.",
        "Researchers studied how sleep affects memory and concentration.",
        "Nurses explained how to manage seasonal allergies at home.",
        "Hospitals expanded telemedicine appointments for rural patients.",
        "Drinking enough water supports kidney function and energy levels.",
    ],
    "finance": [
        "The central bank kept interest rates unchanged this quarter.",
        "Analysts expect modest growth in retail savings accounts.",
        "A household budget helps families track monthly expenses.",
        "Index funds offer diversified exposure with low management fees.",
        "The mortgage calculator compares fixed and variable repayment plans.",
        "Tax advisers explained new deductions for small business owners.",
    ],
    "travel": [
        "The mountain lodge offers guided hiking tours every morning.",
        "Travelers can book ferry tickets to the islands online.",
        "The itinerary covers museums, markets and historic old town walks.",
        "Budget airlines added direct flights to the coastal resort.",
        "Hotel guests enjoy breakfast on a terrace overlooking the harbour.",
        "A travel guide lists the best seasons to visit the national park.",
    ],
    "food": [
        "The recipe combines roasted vegetables with fresh herbs and lemon.",
        "Bakers explained how long sourdough needs to rise overnight.",
        "The restaurant serves seasonal dishes from local farms.",
        "A simple soup uses lentils, carrots, onions and cumin.",
        "Chefs recommend resting steak before slicing it.",
        "The cookbook includes vegetarian dinners ready in thirty minutes.",
    ],
    "education": [
        "The university opened applications for graduate scholarships.",
        "Teachers shared lesson plans for primary school mathematics.",
        "Students can join free online courses in statistics and writing.",
        "The library extended opening hours during examination weeks.",
        "A study guide explains essay structure and citation styles.",
        "The school introduced a coding club for young learners.",
    ],
    "entertainment": [
        "The film festival announced its lineup of independent movies.",
        "The band released a new album after a three year break.",
        "Critics reviewed the theatre production of a classic comedy.",
        "The streaming series returns for a second season in spring.",
        "Audiences applauded the orchestra at the open air concert.",
        "The museum hosts a late night exhibition with live music.",
    ],
    "science": [
        "Astronomers observed a distant galaxy with the new telescope.",
        "Biologists mapped the migration routes of coastal birds.",
        "The experiment measured particle collisions with high precision.",
        "Chemists developed a catalyst that reduces industrial waste.",
        "Geologists studied volcanic rock samples from the ridge.",
        "Climate researchers published ocean temperature records.",
    ],
    "shopping": [
        "The department store opened a new home furnishing section.",
        "Shoppers compared prices on kitchen appliances and cookware.",
        "The outlet mall extended weekend hours before the holidays.",
        "Customers can return unused items within thirty days.",
        "The grocery chain launched a loyalty card with weekly offers.",
        "A buying guide compares vacuum cleaners by suction and noise.",
    ],
    "automotive": [
        "The electric sedan offers a longer driving range this year.",
        "Mechanics recommend checking tyre pressure every month.",
        "The dealership showcased hybrid models at the motor show.",
        "Drivers reviewed the fuel economy of compact crossovers.",
        "The garage explained how to replace brake pads safely.",
        "Safety ratings improved for several family vehicles.",
    ],
    "real_estate": [
        "The apartment listing includes two bedrooms and a balcony.",
        "Agents reported rising demand for suburban family homes.",
        "Buyers should inspect the roof and plumbing before signing.",
        "The rental market cooled slightly during the winter months.",
        "A new housing development adds parks and walking trails.",
        "Landlords must register deposits with an approved scheme.",
    ],
    "government": [
        "The ministry published guidance on renewing passports online.",
        "Citizens can register to vote before the end of the month.",
        "The agency released statistics on regional employment.",
        "Public consultations on the transport plan close on Friday.",
        "The parliament debated changes to the pension system.",
        "Local offices offer help with benefit applications.",
    ],
}

MALICIOUS = {
    "gambling": [
        "Play online casino slots now and win the jackpot bonus instantly.",
        "Bet big with free spins, huge wager bonus and instant casino payouts.",
        "Join the best betting site, claim your deposit bonus and spin the slots.",
        "Win real money jackpot prizes at our casino with no verification.",
        "Poker, roulette and slots with massive bonus credits for new players.",
        "Hot casino bonus codes, free bet credits and jackpot spins today.",
    ],
    "counterfeit": [
        "Buy cheap replica watches and counterfeit designer bags with discount.",
        "Fake luxury handbags and replica sneakers shipped discreetly worldwide.",
        "Counterfeit brand watches at wholesale replica prices, order now.",
        "Replica designer clothing, knockoff bags and fake jewellery on sale.",
    ],
    "pharmacy": [
        "Buy pills online without prescription, cheap pharmacy discount meds.",
        "No prescription needed, order cheap pills and pharmacy drugs fast.",
        "Discount online pharmacy pills shipped overnight with no prescription.",
        "Cheap meds, pills and drugs without a prescription from our pharmacy.",
    ],
}

DOMAINS = {
    "news": "dailyherald-news.com",
    "sports": "stadiumreport.net",
    "technology": "circuitweekly.com",
    "health": "wellcare-clinic.org",
    "finance": "ledgerwise.com",
    "travel": "wanderpath.travel",
    "food": "kitchenfolio.com",
    "education": "brightcampus.edu",
    "entertainment": "marqueebeat.com",
    "science": "labnotes-science.org",
    "shopping": "cartcompass.com",
    "automotive": "motorlane.com",
    "real_estate": "keyhaven-homes.com",
    "government": "citizen-services.gov",
}

# Distinctive place names keep each page's vocabulary partly unique.
PLACES = ["Alder", "Birch", "Cedar", "Dover", "Elm", "Fjord", "Granite", "Harbor", "Iris", "Juniper",
          "Kestrel", "Linden", "Maple", "Nettle", "Oriel", "Poplar", "Quarry", "Rowan", "Spruce", "Tamar",
          "Umber", "Vale", "Willow", "Yarrow", "Zinnia", "Aspen", "Bramble", "Coral", "Dune", "Ember",
          "Fern", "Glade", "Heath", "Inlet", "Jasper", "Knoll", "Lark", "Moss", "North", "Ochre",
          "Pebble", "Quill"]


def write(path: pathlib.Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def write_json(path: pathlib.Path, data) -> None:
    write(path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")


def page(url, title, paragraphs, *, links=(), images=0, extra_head="", body_extra=""):
    paras = "\n".join(f"      <p>{p}</p>" for p in paragraphs)
    link_items = "\n".join(f'        <li><a href="{href}">{text}</a></li>' for href, text in links)
    imgs = "\n".join(
        f'      <img src="data:image/gif;base64,R0lGODlhAQABAAAAACw=" alt="{title} illustration {i + 1}">'
        for i in range(images))
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
  <meta charset="utf-8">
  <title>{title}</title>
  <meta name="description" content="{paragraphs[0]}">
  <link rel="canonical" href="{url}">
{extra_head}</head>
<body>
  <main>
    <article>
      <h1>{title}</h1>
{paras}
{imgs}
    </article>
    <nav>
      <ul>
{link_items}
      </ul>
    </nav>
  </main>
{body_extra}</body>
</html>
"""


def make_scorer():
    base = ROOT / "scorer"
    if base.exists():
        shutil.rmtree(base)
    topics = []
    for label, sentences in TOPICS.items():
        rel = f"topics/{label}.txt"
        write(base / rel, "\n".join(sentences) + "\n")
        topics.append({"label": label, "files": [rel]})
    mal_files = []
    for label, sentences in MALICIOUS.items():
        rel = f"malicious/{label}.txt"
        write(base / rel, "\n".join(sentences) + "\n")
        mal_files.append(rel)
    write_json(base / "manifest.json", {
        "schema_version": 1,
        "topics": topics,
        "malicious": {"files": mal_files},
        "vocabulary_size": 10000,
        "smoothing": 1.0,
    })


def make_bench():
    base = ROOT / "bench"
    corpus = base / "corpus"
    if corpus.exists():
        shutil.rmtree(corpus)
    place = iter(PLACES)
    pages = {}

    # 42 benign pages, three per topic.
    for label, sentences in TOPICS.items():
        domain = DOMAINS[label]
        for k in range(3):
            name = next(place)
            url = f"https://www.{domain}/{label}-{k + 1}"
            paragraphs = [f"{name} {sentences[(k * 2) % 6]}", sentences[(k * 2 + 1) % 6], sentences[(k * 2 + 2) % 6]]
            links = [(f"https://www.{domain}/{label}-{(k + 1) % 3 + 1}", "Related"),
                     (f"https://www.{DOMAINS['news']}/news-1", "Headlines")]
            pages[f"{label}/{label}-{k + 1}.html"] = page(url, f"{name} {label.replace('_', ' ')} notes", paragraphs,
                                                         links=links, images=k)

    # 18 attack pages across the five attack types.
    attack = {
        # semantic confusion: copied news with an inserted promotion
        "semantic_confusion/sc-1.html": ("http://riverside-daily.info/park-reopens", "Riverside park reopening",
            ["City officials announced road closures ahead of the weekend parade near the riverside park.",
             "Play online casino slots now and win the jackpot bonus instantly. Bet big with free spins, huge wager bonus and instant casino payouts.",
             "Hot casino bonus codes, free bet credits and jackpot spins today.",
             "Join the best betting site, claim your deposit bonus and spin the slots."]),
        "semantic_confusion/sc-2.html": ("http://harbor-gazette.info/ferry-strike", "Harbor ferry schedule",
            ["Travelers can book ferry tickets to the islands online from the harbor gazette desk.",
             "The harbor festival gazette lists every ferry departure.",
             "A small sponsor note mentions a lucky roulette evening at the pier."]),
        "semantic_confusion/sc-3.html": ("http://metro-bulletin.info/budget-vote", "Metro budget vote",
            ["The city council approved the new budget after a long public meeting in the metro hall.",
             "Reporters covered the metro budget vote results overnight.",
             "Officials thanked residents for attending the metro meeting."]),
        "semantic_confusion/sc-4.html": ("http://quartz-courier.info/storm", "Quartz coast storm",
            ["Witnesses described the storm damage along the quartz coastal highway.",
             "Buy pills online without prescription, cheap pharmacy discount meds. No prescription needed, order cheap pills and pharmacy drugs fast.",
             "Discount online pharmacy pills shipped overnight with no prescription.",
             "Cheap meds, pills and drugs without a prescription from our pharmacy."]),
        # redirection landing pages
        "redirection/rd-1.html": ("http://spinwheel-lounge.bet/", "Spinwheel lounge",
            ["Win real money jackpot prizes at our casino with no verification.",
             "Poker, roulette and slots with massive bonus credits for new players at spinwheel lounge.",
             "Play online casino slots now and win the jackpot bonus instantly."]),
        "redirection/rd-2.html": ("http://tidal-outfitters.shop/", "Tidal outfitters kayak store",
            ["Tidal outfitters sells kayak paddles, dry bags and wetsuits.",
             "Shoppers compared prices on kayak gear and paddles.",
             "Customers can return unused kayak items within thirty days."]),
        "redirection/rd-3.html": ("http://vault-replicas.shop/", "Vault watches",
            ["Buy cheap replica watches and counterfeit designer bags with discount at vault.",
             "Counterfeit brand watches at wholesale replica prices, order now from vault.",
             "Fake luxury handbags and replica sneakers shipped discreetly worldwide."]),
        # cloaking (crawler view shown to the index)
        "cloaking/ck-1.html": ("http://zephyr-ridge-lodge.com/", "Zephyr ridge hiking lodge",
            ["The zephyr ridge mountain lodge offers guided hiking tours every morning.",
             "Hotel guests at zephyr ridge enjoy breakfast on a terrace overlooking the valley.",
             "A travel guide lists the best seasons to visit zephyr ridge."]),
        "cloaking/ck-2.html": ("http://lumen-bakery.com/", "Lumen sourdough bakery",
            ["Bakers at lumen explained how long sourdough needs to rise overnight.",
             "The lumen bakery serves seasonal loaves from local farms.",
             "Lumen sourdough classes run every saturday."]),
        "cloaking/ck-3.html": ("http://jackpot-harbor.win/", "Harbor jackpot club",
            ["Harbor jackpot club: play online casino slots now and win the jackpot bonus instantly.",
             "Hot casino bonus codes, free bet credits and jackpot spins today at harbor.",
             "Bet big with free spins, huge wager bonus and instant casino payouts."]),
        # keyword stuffing
        "keyword_stuffing/ks-1.html": ("http://trending-now-hub.net/", "Trending now hub",
            ["Trending celebrity news, election results, championship final, new smartphone, film festival lineup.",
             "Trending hub: marathon, interest rates, electric sedan, streaming series, sourdough recipe.",
             "Trending hub: telescope galaxy, passport renewal, apartment listing, vaccination clinic."]),
        "keyword_stuffing/ks-2.html": ("http://bonus-trends.win/", "Bonus trends",
            ["Trending jackpot casino bonus with free spins and betting credits for the championship final.",
             "Win real money jackpot prizes at our casino with no verification.",
             "Poker, roulette and slots with massive bonus credits for new players."]),
        "keyword_stuffing/ks-3.html": ("http://orchid-garden-tips.net/", "Orchid garden tips",
            ["Orchid garden tips cover watering, repotting and light for orchid plants.",
             "Orchid growers recommend bark mixes and humidity trays.",
             "The orchid garden club meets monthly."]),
        # link farm members
        "link_farm/lf-1.html": ("http://nimbus-links-a.org/", "Nimbus resource directory",
            ["Nimbus directory of useful resources about budget travel and ferry tickets.",
             "Nimbus partners share resources on hiking tours and lodges.",
             "Visit the nimbus partner network for more resources."]),
        "link_farm/lf-2.html": ("http://nimbus-links-b.org/", "Nimbus partner hub",
            ["Nimbus partner hub with slots, casino jackpot and betting bonus links.",
             "Bet big with free spins, huge wager bonus and instant casino payouts.",
             "Win real money jackpot prizes at our casino with no verification."]),
        "link_farm/lf-3.html": ("http://nimbus-links-c.org/", "Nimbus garden network",
            ["Nimbus garden network shares composting and seed saving resources.",
             "Nimbus members trade heirloom tomato seeds each spring.",
             "The nimbus network links gardening clubs."]),
        "link_farm/lf-4.html": ("http://nimbus-links-d.org/", "Nimbus pharmacy links",
            ["Nimbus links to discount online pharmacy pills shipped overnight with no prescription.",
             "Buy pills online without prescription, cheap pharmacy discount meds.",
             "Cheap meds, pills and drugs without a prescription from our pharmacy."]),
        "link_farm/lf-5.html": ("http://nimbus-links-e.org/", "Nimbus cycling routes",
            ["Nimbus cycling routes follow quiet lanes along the canal.",
             "Riders share nimbus route maps and repair tips.",
             "The nimbus cycling group rides every sunday."]),
    }
    farm = [u for _, (u, _, _) in attack.items() if "nimbus-links" in u]
    for rel, (url, title, paragraphs) in attack.items():
        links = [(u, "Partner") for u in farm if u != url] if rel.startswith("link_farm/") else []
        pages[rel] = page(url, title, paragraphs, links=links, images=1)

    assert len(pages) == 60, len(pages)
    for rel, html in pages.items():
        write(corpus / rel, html)

    # 20 pairs: per attack type one refused query, one unindexed target, one
    # malicious target filtered at summarizing and one target that survives.
    pairs = [
        # semantic confusion
        ("casino bonus news riverside", "illegal", "http://riverside-daily.info/park-reopens", "semantic_confusion", "understanding"),
        ("riverside park weekend parade", "hot", "http://riverside-news-mirror.info/parade", "semantic_confusion", "retrieval"),
        ("quartz coastal highway storm", "hot", "http://quartz-courier.info/storm", "semantic_confusion", "summarizing"),
        ("harbor gazette ferry", "benign", "http://harbor-gazette.info/ferry-strike", "semantic_confusion", "none"),
        # redirection
        ("counterfeit watches vault", "illegal", "http://vault-replicas.shop/", "redirection", "understanding"),
        ("cheap kayak paddles sale", "hot", "http://paddle-deals-redirect.shop/", "redirection", "retrieval"),
        ("spinwheel lounge poker roulette", "illegal", "http://spinwheel-lounge.bet/", "redirection", "summarizing"),
        ("tidal outfitters kayak", "hot", "http://tidal-outfitters.shop/", "redirection", "none"),
        # cloaking
        ("casino jackpot harbor club", "illegal", "http://jackpot-harbor.win/", "cloaking", "understanding"),
        ("sourdough classes bakery", "benign", "http://sourdough-cloak.example.net/", "cloaking", "retrieval"),
        ("harbor jackpot club spins", "illegal", "http://jackpot-harbor.win/", "cloaking", "summarizing"),
        ("zephyr ridge hiking lodge", "benign", "http://zephyr-ridge-lodge.com/", "cloaking", "none"),
        # keyword stuffing
        ("casino bonus trends", "illegal", "http://bonus-trends.win/", "keyword_stuffing", "understanding"),
        ("orchid repotting humidity", "benign", "http://orchid-care-stuffed.net/", "keyword_stuffing", "retrieval"),
        ("jackpot prizes verification poker", "illegal", "http://bonus-trends.win/", "keyword_stuffing", "summarizing"),
        ("orchid garden tips", "benign", "http://orchid-garden-tips.net/", "keyword_stuffing", "none"),
        # link farm
        ("counterfeit pharmacy nimbus", "illegal", "http://nimbus-links-d.org/", "link_farm", "understanding"),
        ("canal cycling lanes map", "benign", "http://nimbus-links-z.org/", "link_farm", "retrieval"),
        ("nimbus pharmacy pills prescription", "illegal", "http://nimbus-links-d.org/", "link_farm", "summarizing"),
        ("nimbus cycling routes canal", "benign", "http://nimbus-links-e.org/", "link_farm", "none"),
    ]
    lines = []
    expectations = []
    counts = {}
    for query, qclass, target, attack_type, blocked_at in pairs:
        lines.append(json.dumps({"schema_version": 1, "query": query, "query_class": qclass,
                                 "target_url": target, "attack_type": attack_type}))
        expectations.append({"query": query, "target_url": target, "blocked_at": blocked_at})
        counts[attack_type] = counts.get(attack_type, 0) + 1
    write(base / "dataset.jsonl", "\n".join(lines) + "\n")
    write_json(base / "dataset.manifest.json", {
        "schema_version": 1, "name": "desk-bench-20", "created": "2026-10-16",
        "record_count": len(pairs), "counts": counts})
    write_json(base / "expectations.json", {"schema_version": 1, "pairs": expectations})
    write_json(base / "config.json", {
        "schema_version": 1,
        "denylist": ["casino", "counterfeit"],
        "expand_queries": False,
        "k_rewrites": 3,
        "retrieval_depth": 10,
        "alpha": 0.5,
        "beta": 0.5,
        "summary_size": 5,
        "malicious_cutoff": 0.9,
        "relevance_floor": 0.2,
        "bm25_k1": 1.2,
        "bm25_b": 0.75,
        "seed": 7,
    })


def make_netio():
    base = ROOT / "netio"
    landing = page("http://landing.example.org/final", "Landing page",
                   ["Win real money jackpot prizes at our casino with no verification.",
                    "Poker, roulette and slots with massive bonus credits for new players."])
    crawler = page("http://cloak.example.com/", "Mountain lodge guide",
                   ["The mountain lodge offers guided hiking tours every morning and evening for all guests.",
                    "Hotel guests enjoy breakfast on a terrace overlooking the harbour and the old town walls.",
                    "A travel guide lists the best seasons to visit the national park and nearby lakes."])
    user = page("http://cloak.example.com/", "Mountain lodge guide",
                ["Play online casino slots now and win the jackpot bonus instantly with free spins tonight.",
                 "Bet big with free spins, huge wager bonus and instant casino payouts for every new player.",
                 "Join the best betting site, claim your deposit bonus and spin the slots all weekend long."])
    same = page("http://same.example.com/", "Same page",
                ["The recipe combines roasted vegetables with fresh herbs and lemon for a bright dinner.",
                 "Bakers explained how long sourdough needs to rise overnight before baking it."])
    write_json(base / "playback.json", {
        "schema_version": 1,
        "format": "seoaudit-playback",
        "responses": [
            {"url": "http://a.example.org/start", "status": 301,
             "headers": {"Location": "http://b.example.org/hop"}, "body": ""},
            {"url": "http://b.example.org/hop", "status": 200,
             "body": "<html><head><meta http-equiv=\"refresh\" content=\"0; url=http://landing.example.org/final\"></head><body>Moving</body></html>"},
            {"url": "http://landing.example.org/final", "status": 200, "body": landing},
            {"url": "http://script.example.org/", "status": 200,
             "body": "<html><body><script>window.location.href = '/next';</script></body></html>"},
            {"url": "http://script.example.org/next", "status": 200, "body": same},
            {"url": "http://loop.example.org/a", "status": 302, "headers": {"Location": "/b"}},
            {"url": "http://loop.example.org/b", "status": 302, "headers": {"Location": "/a"}},
            {"url": "http://plain.example.org/", "status": 200, "body": same},
            {"url": "http://cloak.example.com/", "view": "crawler", "status": 200, "body": crawler},
            {"url": "http://cloak.example.com/", "view": "user", "status": 200, "body": user},
            {"url": "http://same.example.com/", "status": 200, "body": same},
            {"url": "http://broken.example.com/", "status": 500, "body": "oops"},
        ],
    })
    write_json(base / "dns.json", {
        "schema_version": 1,
        "records": {
            "*.wild.example.net": ["203.0.113.7"],
            "www.tame.example.net": ["198.51.100.4"],
            "tame.example.net": ["198.51.100.4"],
        },
    })
    write(base / "authority.csv", "1,google.com\n2,wikipedia.org\n3,example.org\n20000,longtail.example.com\n")
    write(base / "hotwords.txt", "# trending phrases\n" + "\n".join([
        "championship final", "election results", "new smartphone", "film festival", "marathon",
        "interest rates", "electric sedan", "streaming series", "sourdough recipe", "telescope",
        "passport renewal", "apartment listing", "vaccination"]) + "\n")
    write_json(base / "site_stats.json", {"schema_version": 1, "sites": {
        "trending-now-hub.net": {"subpages": 400, "spam_subpages": 180},
        "orchid-garden-tips.net": {"subpages": 40, "spam_subpages": 0},
    }})
    write(base / "visit_a.txt", "\n".join(f"http://farm{i}.example.com/" for i in range(10)) + "\n")
    write(base / "visit_b.txt", "\n".join(f"http://farm{i}.example.com/" for i in range(3, 13)) + "\n")


def main():
    make_scorer()
    make_bench()
    make_netio()


if __name__ == "__main__":
    main()
