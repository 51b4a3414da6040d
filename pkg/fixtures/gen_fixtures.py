"""Regenerate the hand-designed fixture corpora.

Every post is an explicit row below — nothing is random — so the
expected per-user counts in fixtures/README.md can be audited line by
line.  Writing goes through the package's canonical exporter, which
keeps the files bit-exact under a load/export round trip.

Usage:  python3 fixtures/gen_fixtures.py [output-dir]
"""

from __future__ import annotations

import sys
from pathlib import Path

from contextminer.corpus import Archive, Post, UserSnapshot, export_posts, export_users, parse_ts
from contextminer.contexts import Context, context_to_record
from contextminer.corpus import dump_record


def post(pid, uid, handle, ts, text, tags=(), mentions=(), rt=None, orig=None,
         geo=None, links=0):
    return Post(
        post_id=pid, author_id=uid, author_handle=handle,
        timestamp=parse_ts(ts), text=text,
        hashtags=frozenset(tags), mentions=frozenset(mentions),
        retweet_of=rt, original_author=orig, geo=geo, link_count=links,
    )


def user(uid, handle, followers, followees, name, bio, statuses):
    return UserSnapshot(
        user_id=uid, handle=handle, follower_count=followers,
        followee_count=followees, display_name=name, bio=bio,
        total_statuses=statuses,
    )


# ---------------------------------------------------------------------------
# audit corpus: one coat-drive context, 50 posts, 12 users

AUDIT_USERS = [
    user("w01", "ada_warm", 500, 250, "Ada", "coat drive organiser", 2400),
    user("w02", "bob_rt", 10, 90, "Bob", "retweets a lot", 900),
    user("w03", "cat_rt", 300, 300, "Cat", "signal booster", 1500),
    user("w04", "dan_rt", 40, 60, "Dan", "", 700),
    user("w05", "eve_celeb", 1200, 0, "Eve", "tv presenter", 3200),
    user("w06", "fay_anchor", 9900, 100, "Fay", "regional news anchor", 8000),
    user("w07", "gus_quiet", 0, 50, "Gus", "rarely here", 12),
    user("w08", "hal_offtopic", 80, 20, "Hal", "gym, food, quizzes", 1100),
    user("w09", "ivy_mention", 150, 50, "Ivy", "says thanks to everyone", 640),
    user("w10", "jon_geo", 60, 140, "Jon", "checks in everywhere", 420),
    user("w11", "kim_mixed", 220, 180, "Kim", "office life", 980),
    user("w12", "leo_lurk", 5, 45, "Leo", "", 300),
]

AUDIT_POSTS = [
    # --- on-context (hashtag or whole-word "warmcoats", Feb 1-14) ---
    post("a01", "w01", "ada_warm", "2018-02-01T08:00:00Z",
         "Launching the #warmcoats drive today https://coats.example/start",
         tags=["warmcoats"], links=1),
    post("a02", "w01", "ada_warm", "2018-02-01T12:00:00Z",
         "Donation points listed here https://coats.example/map #warmcoats",
         tags=["warmcoats"], links=1),
    post("a03", "w02", "bob_rt", "2018-02-01T13:00:00Z",
         "RT @ada_warm: Launching the #warmcoats drive today https://coats.example/start",
         tags=["warmcoats"], rt="a01", orig="w01", links=1),
    post("a04", "w03", "cat_rt", "2018-02-01T14:00:00Z",
         "RT @ada_warm: Launching the #warmcoats drive today https://coats.example/start",
         tags=["warmcoats"], rt="a01", orig="w01", links=1),
    post("a05", "w05", "eve_celeb", "2018-02-02T09:00:00Z",
         "Proud to support #warmcoats this winter", tags=["warmcoats"]),
    post("a06", "w04", "dan_rt", "2018-02-02T10:00:00Z",
         "RT @eve_celeb: Proud to support #warmcoats this winter",
         tags=["warmcoats"], rt="a05", orig="w05"),
    post("a07", "w02", "bob_rt", "2018-02-02T11:00:00Z",
         "RT @eve_celeb: Proud to support #warmcoats this winter",
         tags=["warmcoats"], rt="a05", orig="w05"),
    post("a08", "w09", "ivy_mention", "2018-02-02T15:00:00Z",
         "Big thanks @ada_warm @eve_celeb for the #warmcoats push",
         tags=["warmcoats"], mentions=["w01", "w05"]),
    post("a09", "w01", "ada_warm", "2018-02-03T09:30:00Z",
         "Day three of #warmcoats collections", tags=["warmcoats"]),
    post("a10", "w06", "fay_anchor", "2018-02-03T10:00:00Z",
         "Bring your spare warmcoats to the depot"),
    post("a11", "w10", "jon_geo", "2018-02-03T11:00:00Z",
         "#warmcoats pickup van in Leeds today", tags=["warmcoats"],
         geo=(53.8008, -1.5491)),
    post("a12", "w04", "dan_rt", "2018-02-04T10:00:00Z",
         "Sorted two bags for #warmcoats https://wardrobe.example/pics",
         tags=["warmcoats"], links=1),
    post("a13", "w03", "cat_rt", "2018-02-04T12:00:00Z",
         "RT @dan_rt: Sorted two bags for #warmcoats https://wardrobe.example/pics",
         tags=["warmcoats"], rt="a12", orig="w04", links=1),
    post("a14", "w11", "kim_mixed", "2018-02-05T09:00:00Z",
         "Office #warmcoats box is filling up", tags=["warmcoats"],
         mentions=["w11"]),
    post("a15", "w02", "bob_rt", "2018-02-05T10:00:00Z",
         "RT @ada_warm: Day three of #warmcoats collections",
         tags=["warmcoats"], rt="a09", orig="w01"),
    post("a16", "w01", "ada_warm", "2018-02-06T09:00:00Z",
         "Midway update: 300 coats so far https://coats.example/update #warmcoats",
         tags=["warmcoats"], links=1),
    post("a17", "w10", "jon_geo", "2018-02-06T10:00:00Z",
         "RT @ada_warm: Midway update: 300 coats so far https://coats.example/update #warmcoats",
         tags=["warmcoats"], rt="a16", orig="w01", geo=(51.4545, -2.5879), links=1),
    post("a18", "w09", "ivy_mention", "2018-02-07T11:00:00Z",
         "Reminder @kim_mixed the #warmcoats van comes Friday",
         tags=["warmcoats"], mentions=["w11", "w07"]),
    post("a19", "w11", "kim_mixed", "2018-02-08T09:00:00Z",
         "RT @ada_warm: Midway update: 300 coats so far https://coats.example/update #warmcoats",
         tags=["warmcoats"], rt="a16", orig="w01", links=1),
    post("a20", "w06", "fay_anchor", "2018-02-08T14:00:00Z",
         "Depot open late tonight #warmcoats", tags=["warmcoats"]),
    post("a21", "w05", "eve_celeb", "2018-02-09T09:00:00Z",
         "One more week of #warmcoats, keep them coming https://eve.example/coats",
         tags=["warmcoats"], links=1),
    post("a22", "w03", "cat_rt", "2018-02-09T10:00:00Z",
         "RT @eve_celeb: One more week of #warmcoats, keep them coming https://eve.example/coats",
         tags=["warmcoats"], rt="a21", orig="w05", links=1),
    post("a23", "w04", "dan_rt", "2018-02-09T11:00:00Z",
         "RT @eve_celeb: One more week of #warmcoats, keep them coming https://eve.example/coats",
         tags=["warmcoats"], rt="a21", orig="w05", links=1),
    post("a24", "w02", "bob_rt", "2018-02-10T09:00:00Z",
         "My own warmcoats haul photo https://bob.example/haul", links=1),
    post("a25", "w08", "hal_offtopic", "2018-02-10T12:00:00Z",
         "Even I found a coat for #warmcoats", tags=["warmcoats"]),
    # --- off-context (inside the window, no matching term) ---
    post("a26", "w08", "hal_offtopic", "2018-02-01T09:00:00Z",
         "Monday gym session done"),
    post("a27", "w08", "hal_offtopic", "2018-02-02T09:30:00Z",
         "Lunch special at the corner cafe https://food.example/menu", links=1),
    post("a28", "w08", "hal_offtopic", "2018-02-05T08:00:00Z",
         "Cold out there this morning"),
    post("a29", "w08", "hal_offtopic", "2018-02-07T19:00:00Z",
         "Quiz night results are in"),
    post("a30", "w12", "leo_lurk", "2018-02-03T09:00:00Z",
         "RT @hal_offtopic: Monday gym session done", rt="a26", orig="w08"),
    post("a31", "w12", "leo_lurk", "2018-02-05T09:00:00Z",
         "RT @hal_offtopic: Lunch special at the corner cafe https://food.example/menu",
         rt="a27", orig="w08", links=1),
    post("a32", "w07", "gus_quiet", "2018-02-06T12:00:00Z",
         "quiet afternoon reading"),
    post("a33", "w01", "ada_warm", "2018-02-06T18:00:00Z",
         "Evening run along the river"),
    post("a34", "w02", "bob_rt", "2018-02-07T08:00:00Z",
         "Bus was late again"),
    post("a35", "w09", "ivy_mention", "2018-02-07T12:00:00Z",
         "Coffee with @cat_rt today", mentions=["w03"]),
    post("a36", "w11", "kim_mixed", "2018-02-08T19:00:00Z",
         "Great documentary tonight https://tv.example/doc", links=1),
    post("a37", "w12", "leo_lurk", "2018-02-09T09:00:00Z",
         "RT @ada_warm: Evening run along the river", rt="a33", orig="w01"),
    post("a38", "w03", "cat_rt", "2018-02-10T10:00:00Z",
         "Weekend hike photos coming soon"),
    post("a39", "w10", "jon_geo", "2018-02-10T11:00:00Z",
         "Market day in town", geo=(52.2053, 0.1218)),
    post("a40", "w05", "eve_celeb", "2018-02-11T09:00:00Z",
         "New interview out now https://eve.example/press", links=1),
    post("a41", "w04", "dan_rt", "2018-02-11T10:00:00Z",
         "RT @eve_celeb: New interview out now https://eve.example/press",
         rt="a40", orig="w05", links=1),
    post("a42", "w06", "fay_anchor", "2018-02-12T09:00:00Z",
         "Stocktake day at the depot"),
    post("a43", "w02", "bob_rt", "2018-02-12T10:00:00Z",
         "RT @fay_anchor: Stocktake day at the depot", rt="a42", orig="w06"),
    post("a44", "w09", "ivy_mention", "2018-02-13T09:00:00Z",
         "Thanks @jon_geo for the lift", mentions=["w10"]),
    post("a45", "w11", "kim_mixed", "2018-02-13T15:00:00Z",
         "Lost my umbrella again"),
    post("a46", "w01", "ada_warm", "2018-02-14T08:00:00Z",
         "Fog on the bridge this morning https://pics.example/fog", links=1),
    # --- outside the window (excluded from both sides) ---
    post("a47", "w01", "ada_warm", "2018-01-20T09:00:00Z",
         "Planning something big for February #warmcoats", tags=["warmcoats"]),
    post("a48", "w05", "eve_celeb", "2018-01-25T10:00:00Z",
         "Happy Thursday everyone"),
    post("a49", "w11", "kim_mixed", "2018-02-20T09:00:00Z",
         "#warmcoats wrap-up thread", tags=["warmcoats"]),
    post("a50", "w12", "leo_lurk", "2018-02-21T10:00:00Z",
         "RT @ada_warm: Fog on the bridge this morning https://pics.example/fog",
         rt="a46", orig="w01", links=1),
]


# ---------------------------------------------------------------------------
# batch corpus: three one-week drives, one repeat user, one planted
# discovery tag ("coatswap", carried by b01/b06/rep1 outside any window)

BATCH_USERS = [
    user("b01", "alpha_anna", 50, 450, "Anna", "march drive lead", 2100),
    user("b02", "alpha_ben", 100, 100, "Ben", "", 800),
    user("b03", "alpha_cleo", 20, 80, "Cleo", "", 450),
    user("b04", "alpha_dev", 900, 100, "Dev", "columnist", 3000),
    user("b05", "alpha_em", 40, 60, "Em", "", 500),
    user("b06", "beta_fred", 60, 440, "Fred", "april drive lead", 1900),
    user("b07", "beta_gia", 110, 90, "Gia", "", 760),
    user("b08", "beta_hugo", 25, 75, "Hugo", "", 410),
    user("b09", "beta_iris", 980, 20, "Iris", "radio host", 5200),
    user("b10", "beta_jack", 45, 55, "Jack", "", 620),
    user("b11", "gamma_kay", 55, 445, "Kay", "may drive lead", 1700),
    user("b12", "gamma_liam", 120, 80, "Liam", "", 880),
    user("b13", "gamma_mae", 30, 70, "Mae", "", 390),
    user("b14", "gamma_ned", 850, 150, "Ned", "author", 4100),
    user("b15", "gamma_oz", 0, 30, "Oz", "new account", 9),
    user("b16", "side_pia", 10, 10, "Pia", "never on topic", 300),
    user("b17", "side_quinn", 5, 5, "Quinn", "", 40),
    user("rep1", "robin_repeat", 30, 270, "Robin", "helps every drive", 1600),
]

BATCH_POSTS = [
    # --- alpha drive (tagalpha, Mar 1-7) ---
    post("m01", "b01", "alpha_anna", "2018-03-01T09:00:00Z",
         "Kicking off #tagalpha week https://alpha.example/plan",
         tags=["tagalpha"], links=1),
    post("m02", "b01", "alpha_anna", "2018-03-02T09:00:00Z",
         "Drop-off rota for #tagalpha https://alpha.example/rota",
         tags=["tagalpha"], links=1),
    post("m03", "b01", "alpha_anna", "2018-03-03T09:00:00Z",
         "Halfway through #tagalpha already", tags=["tagalpha"]),
    post("m04", "b02", "alpha_ben", "2018-03-01T10:00:00Z",
         "Count me in for #tagalpha", tags=["tagalpha"]),
    post("m05", "b02", "alpha_ben", "2018-03-01T11:00:00Z",
         "RT @alpha_anna: Kicking off #tagalpha week https://alpha.example/plan",
         tags=["tagalpha"], rt="m01", orig="b01", links=1),
    post("m06", "b03", "alpha_cleo", "2018-03-01T12:00:00Z",
         "RT @alpha_anna: Kicking off #tagalpha week https://alpha.example/plan",
         tags=["tagalpha"], rt="m01", orig="b01", links=1),
    post("m07", "b03", "alpha_cleo", "2018-03-02T10:00:00Z",
         "RT @alpha_ben: Count me in for #tagalpha",
         tags=["tagalpha"], rt="m04", orig="b02"),
    post("m08", "b04", "alpha_dev", "2018-03-02T11:00:00Z",
         "RT @alpha_anna: Drop-off rota for #tagalpha https://alpha.example/rota",
         tags=["tagalpha"], rt="m02", orig="b01", links=1),
    post("m09", "b04", "alpha_dev", "2018-03-02T12:00:00Z",
         "RT @alpha_ben: Count me in for #tagalpha",
         tags=["tagalpha"], rt="m04", orig="b02"),
    post("m10", "b05", "alpha_em", "2018-03-03T10:00:00Z",
         "RT @alpha_anna: Halfway through #tagalpha already",
         tags=["tagalpha"], rt="m03", orig="b01"),
    post("m11", "b05", "alpha_em", "2018-03-03T11:00:00Z",
         "RT @alpha_ben: Count me in for #tagalpha",
         tags=["tagalpha"], rt="m04", orig="b02"),
    post("m12", "rep1", "robin_repeat", "2018-03-04T09:00:00Z",
         "Van routes for #tagalpha volunteers https://robin.example/routes",
         tags=["tagalpha"], links=1),
    post("m13", "rep1", "robin_repeat", "2018-03-04T10:00:00Z",
         "RT @alpha_anna: Kicking off #tagalpha week https://alpha.example/plan",
         tags=["tagalpha"], rt="m01", orig="b01", links=1),
    post("m14", "b02", "alpha_ben", "2018-03-05T09:00:00Z",
         "RT @robin_repeat: Van routes for #tagalpha volunteers https://robin.example/routes",
         tags=["tagalpha"], rt="m12", orig="rep1", links=1),
    # --- beta drive (tagbeta, Apr 1-7) ---
    post("m15", "b06", "beta_fred", "2018-04-01T09:00:00Z",
         "Here we go: #tagbeta starts now https://beta.example/start",
         tags=["tagbeta"], links=1),
    post("m16", "b06", "beta_fred", "2018-04-02T09:00:00Z",
         "Second day of #tagbeta, keep sharing", tags=["tagbeta"]),
    post("m17", "b07", "beta_gia", "2018-04-01T10:00:00Z",
         "Signed up for #tagbeta", tags=["tagbeta"]),
    post("m18", "b07", "beta_gia", "2018-04-01T11:00:00Z",
         "RT @beta_fred: Here we go: #tagbeta starts now https://beta.example/start",
         tags=["tagbeta"], rt="m15", orig="b06", links=1),
    post("m19", "b08", "beta_hugo", "2018-04-01T12:00:00Z",
         "RT @beta_fred: Here we go: #tagbeta starts now https://beta.example/start",
         tags=["tagbeta"], rt="m15", orig="b06", links=1),
    post("m20", "b08", "beta_hugo", "2018-04-02T10:00:00Z",
         "RT @beta_gia: Signed up for #tagbeta",
         tags=["tagbeta"], rt="m17", orig="b07"),
    post("m21", "b09", "beta_iris", "2018-04-02T11:00:00Z",
         "RT @beta_fred: Second day of #tagbeta, keep sharing",
         tags=["tagbeta"], rt="m16", orig="b06"),
    post("m22", "b09", "beta_iris", "2018-04-02T12:00:00Z",
         "RT @beta_gia: Signed up for #tagbeta",
         tags=["tagbeta"], rt="m17", orig="b07"),
    post("m23", "b10", "beta_jack", "2018-04-03T10:00:00Z",
         "RT @beta_fred: Here we go: #tagbeta starts now https://beta.example/start",
         tags=["tagbeta"], rt="m15", orig="b06", links=1),
    post("m24", "b10", "beta_jack", "2018-04-03T11:00:00Z",
         "RT @beta_gia: Signed up for #tagbeta",
         tags=["tagbeta"], rt="m17", orig="b07"),
    post("m25", "rep1", "robin_repeat", "2018-04-04T09:00:00Z",
         "Same van, new drive #tagbeta", tags=["tagbeta"]),
    post("m26", "rep1", "robin_repeat", "2018-04-04T10:00:00Z",
         "RT @beta_fred: Here we go: #tagbeta starts now https://beta.example/start",
         tags=["tagbeta"], rt="m15", orig="b06", links=1),
    post("m27", "b07", "beta_gia", "2018-04-05T09:00:00Z",
         "RT @robin_repeat: Same van, new drive #tagbeta",
         tags=["tagbeta"], rt="m25", orig="rep1"),
    # --- gamma drive (taggamma, May 1-7) ---
    post("m28", "b11", "gamma_kay", "2018-05-01T09:00:00Z",
         "Launching #taggamma https://gamma.example/launch",
         tags=["taggamma"], links=1),
    post("m29", "b11", "gamma_kay", "2018-05-02T09:00:00Z",
         "Donation map for #taggamma https://gamma.example/map",
         tags=["taggamma"], links=1),
    post("m30", "b12", "gamma_liam", "2018-05-01T10:00:00Z",
         "Happy to help with #taggamma", tags=["taggamma"]),
    post("m31", "b12", "gamma_liam", "2018-05-01T11:00:00Z",
         "RT @gamma_kay: Launching #taggamma https://gamma.example/launch",
         tags=["taggamma"], rt="m28", orig="b11", links=1),
    post("m32", "b13", "gamma_mae", "2018-05-01T12:00:00Z",
         "RT @gamma_kay: Launching #taggamma https://gamma.example/launch",
         tags=["taggamma"], rt="m28", orig="b11"),
    post("m33", "b13", "gamma_mae", "2018-05-02T10:00:00Z",
         "RT @gamma_liam: Happy to help with #taggamma",
         tags=["taggamma"], rt="m30", orig="b12"),
    post("m34", "b14", "gamma_ned", "2018-05-02T11:00:00Z",
         "RT @gamma_kay: Donation map for #taggamma https://gamma.example/map",
         tags=["taggamma"], rt="m29", orig="b11", links=1),
    post("m35", "b14", "gamma_ned", "2018-05-02T12:00:00Z",
         "RT @gamma_liam: Happy to help with #taggamma",
         tags=["taggamma"], rt="m30", orig="b12"),
    post("m36", "b15", "gamma_oz", "2018-05-03T10:00:00Z",
         "RT @gamma_kay: Launching #taggamma https://gamma.example/launch",
         tags=["taggamma"], rt="m28", orig="b11"),
    post("m37", "b15", "gamma_oz", "2018-05-03T11:00:00Z",
         "RT @gamma_liam: Happy to help with #taggamma",
         tags=["taggamma"], rt="m30", orig="b12"),
    # --- off-context chatter inside the windows ---
    post("m38", "b16", "side_pia", "2018-03-02T08:00:00Z", "New phone day"),
    post("m39", "b16", "side_pia", "2018-04-02T08:00:00Z", "Springtime at last"),
    post("m40", "b16", "side_pia", "2018-05-02T08:00:00Z", "Allotment progress"),
    post("m41", "b17", "side_quinn", "2018-03-03T08:00:00Z", "hello world"),
    post("m42", "b01", "alpha_anna", "2018-03-06T10:00:00Z",
         "Weekend plans sorted"),
    post("m43", "b06", "beta_fred", "2018-04-06T10:00:00Z",
         "Good read this morning https://news.example/read", links=1),
    post("m44", "rep1", "robin_repeat", "2018-03-06T12:00:00Z",
         "Van needs a wash"),
    post("m45", "rep1", "robin_repeat", "2018-04-06T12:00:00Z",
         "Van fixed and ready"),
    # --- planted future tag, outside every context window ---
    post("m46", "b01", "alpha_anna", "2018-06-01T10:00:00Z",
         "#coatswap planning call tonight", tags=["coatswap"]),
    post("m47", "b06", "beta_fred", "2018-06-02T12:00:00Z",
         "Count me in for #coatswap", tags=["coatswap"]),
    post("m48", "rep1", "robin_repeat", "2018-06-03T09:00:00Z",
         "#coatswap flyers ready", tags=["coatswap"]),
]

BATCH_CONTEXTS = [
    Context(
        context_id="alpha_drive", terms=frozenset({"tagalpha"}),
        interval=(parse_ts("2018-03-01T00:00:00Z"), parse_ts("2018-03-07T23:59:59Z")),
        status="approved", origin="seed",
    ),
    Context(
        context_id="beta_drive", terms=frozenset({"tagbeta"}),
        interval=(parse_ts("2018-04-01T00:00:00Z"), parse_ts("2018-04-07T23:59:59Z")),
        status="approved", origin="seed",
    ),
    Context(
        context_id="gamma_drive", terms=frozenset({"taggamma"}),
        interval=(parse_ts("2018-05-01T00:00:00Z"), parse_ts("2018-05-07T23:59:59Z")),
        status="approved", origin="seed",
    ),
]


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent
    audit = Archive(AUDIT_POSTS, {u.user_id: u for u in AUDIT_USERS})
    export_posts(audit, out / "audit.jsonl")
    export_users(audit, out / "audit_users.jsonl")

    batch = Archive(BATCH_POSTS, {u.user_id: u for u in BATCH_USERS})
    export_posts(batch, out / "batch_posts.jsonl")
    export_users(batch, out / "batch_users.jsonl")
    lines = [dump_record(context_to_record(c)) for c in BATCH_CONTEXTS]
    (out / "batch_contexts.jsonl").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )
    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    main()
