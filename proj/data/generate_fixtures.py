#!/usr/bin/env python3
"""Regenerates the bundled fixture data. Output is deterministic."""

import csv
import json
import random
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent
rng = random.Random(20240611)

# id, name, category, plural, cuisines, seasons
INGREDIENTS = [
    ("chicken", "chicken", "protein", "chicken", "indian|mexican|spanish", "all"),
    ("shrimp", "shrimp", "protein", "shrimp", "spanish|mexican", "summer"),
    ("egg", "egg", "protein", "eggs", "french|italian", "all"),
    ("beef", "beef", "protein", "beef", "mexican|french", "winter"),
    ("chorizo", "chorizo", "protein", "chorizo", "spanish|mexican", "all"),
    ("onion", "onion", "vegetable", "onions", "spanish|italian|indian|mexican|french", "all"),
    ("garlic", "garlic", "vegetable", "garlic", "spanish|italian|indian|mexican|french", "all"),
    ("tomato", "tomato", "vegetable", "tomatoes", "spanish|italian|mexican|indian", "summer"),
    ("bell_pepper", "bell pepper", "vegetable", "bell peppers", "spanish|mexican", "summer"),
    ("spinach", "spinach", "vegetable", "spinach", "indian|italian|french", "spring"),
    ("mushroom", "mushroom", "vegetable", "mushrooms", "french|italian", "autumn"),
    ("potato", "potato", "vegetable", "potatoes", "spanish|indian|french", "winter"),
    ("carrot", "carrot", "vegetable", "carrots", "french", "autumn"),
    ("celery", "celery", "vegetable", "celery", "french|italian", "autumn"),
    ("broccoli", "broccoli", "vegetable", "broccoli", "italian", "winter"),
    ("lemon", "lemon", "fruit", "lemons", "spanish|italian|mexican", "winter"),
    ("strawberry", "strawberry", "fruit", "strawberries", "french", "summer"),
    ("apple", "apple", "fruit", "apples", "french", "autumn"),
    ("milk", "milk", "dairy", "milk", "french", "all"),
    ("cream", "cream", "dairy", "cream", "french|indian", "all"),
    ("butter", "butter", "dairy", "butter", "french|indian", "all"),
    ("cheese", "cheese", "dairy", "cheese", "italian|french", "all"),
    ("rice", "rice", "grain", "rice", "spanish|indian|mexican", "all"),
    ("flour", "flour", "grain", "flour", "french|italian", "all"),
    ("saffron", "saffron", "spice", "saffron", "spanish|indian", "all"),
    ("paprika", "paprika", "spice", "paprika", "spanish", "all"),
    ("cumin", "cumin", "spice", "cumin", "indian|mexican", "all"),
    ("cinnamon", "cinnamon", "spice", "cinnamon", "indian|mexican", "all"),
    ("chili", "chili", "spice", "chilies", "mexican|indian", "summer"),
    ("ginger", "ginger", "spice", "ginger", "indian", "all"),
    ("basil", "basil", "herb", "basil", "italian", "summer"),
    ("oregano", "oregano", "herb", "oregano", "italian|mexican", "all"),
    ("cilantro", "cilantro", "herb", "cilantro", "mexican|indian", "summer"),
    ("parsley", "parsley", "herb", "parsley", "spanish|french", "all"),
    ("olive_oil", "olive oil", "fat", "olive oil", "spanish|italian", "all"),
    ("stock", "stock", "liquid", "stock", "french|spanish", "all"),
    ("soy_sauce", "soy sauce", "liquid", "soy sauce", "", "all"),
    ("white_wine", "white wine", "liquid", "white wine", "french|spanish|italian", "all"),
    ("sugar", "sugar", "sweetener", "sugar", "french", "all"),
    ("salt", "salt", "other", "salt", "", "all"),
]
NAME = {i[0]: i[1] for i in INGREDIENTS}
PLURAL = {i[0]: i[3] for i in INGREDIENTS}
CATEGORY = {i[0]: i[2] for i in INGREDIENTS}

FEATURES = ["weight", "polarity", "volatility", "sulfur", "ester", "aromatic"]
TRUE_WEIGHTS = {"ester": 0.45, "sulfur": -0.40, "aromatic": 0.20}
COMPOUND_NAMES = [
    "ethyl butanoate", "hexanal", "linalool", "limonene", "allicin", "dimethyl sulfide", "vanillin",
    "eugenol", "cinnamaldehyde", "safranal", "geraniol", "furaneol", "diacetyl", "methional",
    "pyrazine", "capsaicin", "gingerol", "citral", "octenol", "acetaldehyde", "estragole",
    "thymol", "carvone", "beta-ionone", "butyric acid",
]


def typicality_table():
    t = {
        "spanish": {"saffron": .95, "chorizo": .9, "paprika": .85, "olive_oil": .9, "rice": .7, "tomato": .7,
                    "garlic": .8, "shrimp": .65, "onion": .6, "bell_pepper": .6, "white_wine": .5, "potato": .55,
                    "parsley": .5, "lemon": .45, "stock": .4, "egg": .35},
        "italian": {"basil": .9, "oregano": .8, "tomato": .85, "olive_oil": .9, "cheese": .8, "garlic": .75,
                    "mushroom": .5, "flour": .55, "white_wine": .45, "spinach": .4, "broccoli": .35, "lemon": .4},
        "indian": {"cumin": .9, "ginger": .85, "chili": .8, "rice": .75, "cilantro": .7, "chicken": .6,
                   "cream": .45, "onion": .7, "garlic": .7, "tomato": .55, "cinnamon": .5, "spinach": .55,
                   "potato": .5, "saffron": .4, "butter": .45},
        "mexican": {"chili": .9, "cilantro": .85, "cumin": .6, "tomato": .8, "bell_pepper": .6, "onion": .7,
                    "beef": .6, "chicken": .55, "lemon": .5, "rice": .5, "oregano": .4, "chorizo": .45},
        "french": {"butter": .95, "cream": .8, "egg": .7, "cheese": .65, "flour": .7, "white_wine": .7,
                   "mushroom": .6, "onion": .55, "carrot": .55, "celery": .5, "parsley": .55, "sugar": .5,
                   "apple": .5, "milk": .6, "strawberry": .45, "stock": .6},
    }
    return t


CUISINE_NAMES = {"spanish": "Spanish", "italian": "Italian", "indian": "Indian", "mexican": "Mexican",
                 "french": "French"}

# per four servings: (quantity, unit)
BASE_QTY = {
    "chicken": (500, "gram"), "shrimp": (400, "gram"), "egg": (4, ""), "beef": (600, "gram"),
    "chorizo": (150, "gram"), "onion": (1, ""), "garlic": (2, "clove"), "tomato": (2, ""),
    "bell_pepper": (1, ""), "spinach": (2, "cup"), "mushroom": (200, "gram"), "potato": (3, ""),
    "carrot": (2, ""), "celery": (2, "stalk"), "broccoli": (300, "gram"), "lemon": (1, ""),
    "strawberry": (2, "cup"), "apple": (3, ""), "milk": (1, "cup"), "cream": (0.5, "cup"),
    "butter": (4, "tablespoon"), "cheese": (1, "cup"), "rice": (1.5, "cup"), "flour": (2, "cup"),
    "saffron": (1, "pinch"), "paprika": (1, "teaspoon"), "cumin": (1, "teaspoon"),
    "cinnamon": (1, "teaspoon"), "chili": (1, ""), "ginger": (1, "tablespoon"), "basil": (0.25, "cup"),
    "oregano": (1, "teaspoon"), "cilantro": (0.25, "cup"), "parsley": (0.25, "cup"),
    "olive_oil": (2, "tablespoon"), "stock": (4, "cup"), "soy_sauce": (3, "tablespoon"),
    "white_wine": (0.5, "cup"), "sugar": (0.5, "cup"), "salt": (1, "teaspoon"),
}

DISHES = {
    "soup": {"veg": ["onion", "garlic", "carrot", "celery", "potato", "tomato", "spinach", "mushroom", "broccoli",
                     "bell_pepper"],
             "protein": ["chicken", "shrimp", "chorizo", "beef"], "fat": ["olive_oil", "butter"],
             "liquid": ["stock"], "spice": ["saffron", "paprika", "cumin", "chili", "ginger"],
             "herb": ["parsley", "basil", "cilantro", "oregano"], "extra": ["cream", "rice", "white_wine"]},
    "quiche": {"veg": ["onion", "spinach", "mushroom", "bell_pepper", "tomato", "broccoli"],
               "protein": ["chorizo", "shrimp"], "herb": ["parsley", "basil", "oregano"]},
    "salad": {"veg": ["tomato", "bell_pepper", "spinach", "celery", "carrot", "onion"],
              "fruit": ["apple", "strawberry"], "herb": ["basil", "parsley", "cilantro"],
              "protein": ["shrimp", "chicken", "egg"]},
    "stew": {"protein": ["beef", "chicken", "chorizo"], "veg": ["potato", "carrot", "onion", "garlic", "tomato",
                                                                  "celery", "mushroom", "bell_pepper"],
             "liquid": ["stock", "white_wine"], "spice": ["paprika", "cumin", "saffron", "cinnamon", "chili"],
             "fat": ["olive_oil", "butter"]},
    "dessert": {"fruit": ["strawberry", "apple", "lemon"], "dairy": ["milk", "cream"],
                "spice": ["cinnamon", "ginger"]},
    "stir_fry": {"protein": ["chicken", "beef", "shrimp"], "veg": ["broccoli", "bell_pepper", "carrot", "mushroom",
                                                                   "onion", "spinach"],
                 "spice": ["ginger", "chili"]},
}
DISH_COUNTS = {"soup": 42, "quiche": 30, "salad": 32, "stew": 34, "dessert": 30, "stir_fry": 32}
DISH_CUISINES = {
    "soup": ["spanish", "french", "indian", "mexican", "italian"],
    "quiche": ["french", "french", "italian", "spanish"],
    "salad": ["italian", "spanish", "mexican", "french"],
    "stew": ["spanish", "french", "indian", "mexican"],
    "dessert": ["french", "french", "italian", "spanish"],
    "stir_fry": ["indian", "mexican", "italian", "spanish"],
}

TYP = typicality_table()


def pick(pool, k, cuisine, exclude=()):
    pool = [p for p in pool if p not in exclude]
    chosen = []
    for _ in range(min(k, len(pool))):
        weights = [TYP[cuisine].get(p, 0.0) + 0.15 for p in pool]
        x = rng.choices(pool, weights=weights)[0]
        chosen.append(x)
        pool.remove(x)
    return chosen


def names(ids):
    n = [NAME[i] for i in ids]
    if len(n) == 1:
        return n[0]
    return ", ".join(n[:-1]) + " and " + n[-1]


def compose(dish, cuisine):
    """Returns (ingredient ids in listing order, step sentences)."""
    d = DISHES[dish]
    if dish == "soup":
        veg = pick(d["veg"], rng.randint(2, 4), cuisine)
        fat = pick(d["fat"], 1, cuisine)
        protein = pick(d["protein"], 1, cuisine) if rng.random() < 0.6 else []
        spice = pick(d["spice"], rng.randint(1, 2), cuisine)
        herb = pick(d["herb"], 1, cuisine) if rng.random() < 0.6 else []
        extra = pick(d["extra"], 1, cuisine) if rng.random() < 0.4 else []
        salt = ["salt"] if rng.random() < 0.7 else []
        ids = fat + veg + protein + ["stock"] + spice + herb + extra + salt
        v0 = veg[0]
        steps = [f"Chop the {names(veg)}.",
                 f"Heat the {NAME[fat[0]]} in a large pot over medium heat.",
                 f"Fry the {NAME[v0]} in the {NAME[fat[0]]} for {rng.choice([5, 6, 8])} minutes."]
        if protein:
            steps.append(f"Add the {NAME[protein[0]]} to the {NAME[v0]} and brown for 4 minutes.")
        steps.append(f"Pour the {names(['stock'] + spice + extra)} over the {NAME[v0]} and simmer for "
                     f"{rng.choice([20, 25, 30, 40])} minutes.")
        if herb or salt:
            steps.append(f"Season the {NAME[v0]} with the {names(herb + salt)}.")
        steps.append("Ladle into bowls and serve hot.")
        return ids, steps
    if dish == "quiche":
        veg = pick(d["veg"], rng.randint(1, 3), cuisine)
        protein = pick(d["protein"], 1, cuisine) if rng.random() < 0.4 else []
        dairy = ["milk"] if rng.random() < 0.5 else ["cream"]
        herb = pick(d["herb"], 1, cuisine) if rng.random() < 0.5 else []
        salt = ["salt"] if rng.random() < 0.7 else []
        ids = ["flour", "butter", "egg"] + dairy + ["cheese"] + veg + protein + herb + salt
        v0 = veg[0]
        steps = [f"Cut the {names(veg + protein)}.",
                 f"Fry the {NAME[v0]} in the butter for 5 minutes.",
                 f"Mix the {names(['egg'] + dairy + ['cheese'] + herb + salt)} in a bowl.",
                 "Roll the flour into a crust with a rolling pin.",
                 f"Sprinkle the {NAME[v0]} over the flour crust.",
                 f"Assemble the quiche by pouring the egg over the {NAME[v0]}.",
                 f"Bake in the oven for {rng.choice([30, 35, 40])} minutes.",
                 "Cool on a wire rack for 10 minutes."]
        return ids, steps
    if dish == "salad":
        veg = pick(d["veg"], rng.randint(2, 4), cuisine)
        fruit = pick(d["fruit"], 1, cuisine) if rng.random() < 0.4 else []
        protein = pick(d["protein"], 1, cuisine) if rng.random() < 0.35 else []
        herb = pick(d["herb"], 1, cuisine) if rng.random() < 0.6 else []
        cheese = ["cheese"] if rng.random() < 0.5 else []
        lemon = ["lemon"] if rng.random() < 0.6 else []
        ids = veg + fruit + protein + ["olive_oil"] + lemon + ["salt"] + cheese + herb
        v0 = veg[0]
        steps = [f"Slice the {names(veg + fruit + protein)}.",
                 f"Whisk the {names(['olive_oil'] + lemon + ['salt'])} in a small bowl.",
                 f"Toss the {NAME[v0]} with the olive oil in a large bowl."]
        if cheese or herb:
            steps.append(f"Sprinkle the {names(cheese + herb)} over the {NAME[v0]}.")
        steps.append("Chill for 10 minutes before serving.")
        return ids, steps
    if dish == "stew":
        protein = pick(d["protein"], 1, cuisine)
        veg = pick(d["veg"], rng.randint(2, 4), cuisine)
        liquid = pick(d["liquid"], rng.randint(1, 2), cuisine)
        spice = pick(d["spice"], rng.randint(1, 2), cuisine)
        fat = pick(d["fat"], 1, cuisine)
        salt = ["salt"] if rng.random() < 0.8 else []
        ids = protein + fat + veg + liquid + spice + salt
        p0, v0 = protein[0], veg[0]
        steps = [f"Cut the {NAME[p0]} into cubes.",
                 f"Dice the {names(veg)}.",
                 f"Brown the {NAME[p0]} in the {NAME[fat[0]]} in a heavy pot for 8 minutes.",
                 f"Add the {NAME[v0]} to the {NAME[p0]} and cook for 5 minutes.",
                 f"Pour in the {names(liquid + spice + salt)} and stir in the {NAME[p0]}.",
                 f"Simmer for {rng.choice([60, 75, 90])} minutes."]
        return ids, steps
    if dish == "dessert":
        fruit = pick(d["fruit"], rng.randint(1, 2), cuisine)
        dairy = pick(d["dairy"], 1, cuisine)
        spice = pick(d["spice"], 1, cuisine) if rng.random() < 0.6 else []
        ids = ["flour", "sugar", "egg", "butter"] + dairy + fruit + spice
        f0 = fruit[0]
        steps = ["Whisk the egg and sugar in a bowl until pale.",
                 "Melt the butter in a small saucepan.",
                 f"Fold the flour and {NAME[dairy[0]]} into the egg and butter.",
                 f"Slice the {names(fruit)}.",
                 f"Layer the {NAME[f0]} over the egg mixture in a baking dish"
                 + (f" with the {NAME[spice[0]]}." if spice else "."),
                 f"Bake in the oven for {rng.choice([25, 30, 35])} minutes.",
                 "Cool on a wire rack for 15 minutes."]
        return ids, steps
    if dish == "stir_fry":
        protein = pick(d["protein"], 1, cuisine)
        veg = pick(d["veg"], rng.randint(2, 4), cuisine)
        spice = pick(d["spice"], rng.randint(1, 2), cuisine)
        garlic = ["garlic"] if rng.random() < 0.7 else []
        ids = protein + ["olive_oil"] + veg + garlic + spice + ["soy_sauce", "rice"]
        p0, v0 = protein[0], veg[0]
        steps = [f"Slice the {NAME[p0]} thinly.",
                 f"Chop the {names(veg + garlic)}.",
                 "Heat the olive oil in a wok over high heat.",
                 f"Stir-fry the {NAME[p0]} in the olive oil for 4 minutes.",
                 f"Add the {NAME[v0]}, {names(spice + ['soy_sauce'])} to the {NAME[p0]} and fry for 3 minutes.",
                 "Boil the rice in a saucepan for 15 minutes.",
                 f"Serve the {NAME[p0]} over the rice."]
        return ids, steps
    raise ValueError(dish)


def nice(q):
    """Round to the nearest quarter (or integer for large amounts)."""
    if q >= 20:
        return float(round(q / 5) * 5)
    return max(0.25, round(q * 4) / 4)


def fraction_text(q):
    f = Fraction(q).limit_denominator(4)
    whole, rem = divmod(f.numerator, f.denominator)
    if rem == 0:
        return str(whole)
    frac = f"{rem}/{f.denominator}"
    return f"{whole} {frac}" if whole else frac


def raw_line(ing, qty, unit):
    noun = NAME[ing] if (unit or qty <= 1) else PLURAL[ing]
    parts = [fraction_text(qty)]
    if unit:
        parts.append(unit + ("s" if qty > 1 and unit not in ("pinch",) else ("es" if qty > 1 else "")))
    parts.append(noun)
    return " ".join(parts)


def write_recipes():
    lines = []
    n = 0
    for dish, count in DISH_COUNTS.items():
        for k in range(count):
            n += 1
            cuisine = DISH_CUISINES[dish][k % len(DISH_CUISINES[dish])]
            if dish == "soup" and k % 6 == 0:
                cuisine = "spanish"
            ids, steps = compose(dish, cuisine)
            servings = rng.choice([2, 4, 4, 6, 8])
            use_raw = n % 5 == 0
            ingredients = []
            for ing in ids:
                base, unit = BASE_QTY[ing]
                qty = nice(base * rng.choice([0.5, 0.75, 1, 1, 1, 1.25, 1.5]) * servings / 4)
                if use_raw:
                    ingredients.append({"raw_text": raw_line(ing, qty, unit)})
                else:
                    item = {"ingredient_id": ing, "qty": qty}
                    if unit:
                        item["unit"] = unit
                    ingredients.append(item)
            main = next(i for i in ids if CATEGORY[i] in ("protein", "vegetable", "fruit"))
            title = f"{CUISINE_NAMES[cuisine]} {NAME[main]} {dish.replace('_', ' ')}"
            lines.append({"id": f"r{n:04d}", "title": title, "dish_type": dish, "cuisine": cuisine,
                          "servings": servings, "ingredients": ingredients, "steps": steps})
    with open(HERE / "recipes.jsonl", "w") as f:
        for line in lines:
            f.write(json.dumps(line) + "\n")


def write_catalog():
    compounds = []
    labeled = set(rng.sample(range(len(COMPOUND_NAMES)), 18))
    for i, name in enumerate(COMPOUND_NAMES):
        feats = {f: round(rng.random(), 4) for f in FEATURES}
        score = 0.45 + sum(w * (feats[f] - 0.5) for f, w in TRUE_WEIGHTS.items()) + rng.gauss(0, 0.03)
        label = f"{min(1.0, max(0.0, score)):.4f}" if i in labeled else ""
        compounds.append((f"c{i + 1:02d}", name, feats, label))
    with open(HERE / "compounds.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["compound_id", "name"] + [f"feature:{x}" for x in FEATURES] + ["pleasantness"])
        for cid, name, feats, label in compounds:
            w.writerow([cid, name] + [feats[x] for x in FEATURES] + [label])
    with open(HERE / "ingredient_compounds.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ingredient_id", "compound_id", "ppm"])
        blanks = 0
        for ing in INGREDIENTS:
            if ing[0] == "salt":
                continue
            chosen = sorted(rng.sample(range(len(compounds)), rng.randint(3, 7)))
            for c in chosen:
                ppm = "" if (blanks < 3 and rng.random() < 0.04) else f"{rng.uniform(0.5, 120):.2f}"
                if ppm == "":
                    blanks += 1
                w.writerow([ing[0], compounds[c][0], ppm])
    with open(HERE / "ingredients.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ingredient_id", "name", "category", "cuisines", "seasons"])
        for iid, name, cat, _plural, cuisines, seasons in INGREDIENTS:
            w.writerow([iid, name, cat, cuisines, seasons])
    with open(HERE / "cuisines.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cuisine_id", "name", "ingredient_id", "typicality"])
        for cid, table in TYP.items():
            for iid, t in sorted(table.items()):
                w.writerow([cid, CUISINE_NAMES[cid], iid, t])


if __name__ == "__main__":
    write_catalog()
    write_recipes()


# Parser evaluation sets. Gold labels follow the labelling guide in
# eval/README.md; the generated lines come from templates with known
# fields, the hand-written ones below cover messier phrasing.

UNIT_FORMS = {
    "cup": ["cup", "cups", "c"], "tablespoon": ["tablespoon", "tablespoons", "tbsp"],
    "teaspoon": ["teaspoon", "teaspoons", "tsp"], "gram": ["g", "grams"], "ounce": ["oz", "ounces"],
    "pound": ["lb", "pounds"], "clove": ["cloves", "clove"], "pinch": ["pinch"], "can": ["can", "cans"],
    "milliliter": ["ml"],
}
QTY_FORMS = [("1", 1.0), ("2", 2.0), ("3", 3.0), ("1/2", 0.5), ("1/4", 0.25), ("3/4", 0.75), ("1 1/2", 1.5),
             ("½", 0.5), ("1½", 1.5), ("0.5", 0.5), ("2-3", 2.0), ("250", 250.0), ("2 to 3", 2.0)]
LEAD_STATES = ["", "", "", "chopped", "diced", "fresh", "large", "minced", "grated", "dried", "ground", "frozen"]
TRAIL_STATES = ["", "", "", "chopped", "finely diced", "peeled and sliced", "melted", "drained", "thinly sliced"]
EVAL_NAMES = ["onion", "garlic", "tomato", "bell pepper", "carrot", "potato", "olive oil", "butter", "flour",
              "sugar", "rice", "cheese", "milk", "spinach", "mushroom", "chicken breast", "red lentil",
              "green onion", "brown sugar", "parsley", "basil", "cumin", "paprika", "lemon", "apple"]
EVAL_PLURAL = {"onion": "onions", "tomato": "tomatoes", "bell pepper": "bell peppers", "carrot": "carrots",
               "potato": "potatoes", "mushroom": "mushrooms", "chicken breast": "chicken breasts",
               "red lentil": "red lentils", "green onion": "green onions", "lemon": "lemons", "apple": "apples"}

HAND_INGREDIENTS = [
    ("Salt and pepper to taste", None, "", "salt and pepper", ""),
    ("1 (14 oz) can diced tomatoes, drained", 1.0, "can", "tomato", "diced drained"),
    ("Juice of 1 lemon", 1.0, "", "lemon juice", ""),
    ("2 large eggs, lightly beaten", 2.0, "", "egg", "large beaten"),
    ("3 tablespoons unsalted butter, melted", 3.0, "tablespoon", "unsalted butter", "melted"),
    ("1 cup of milk", 1.0, "cup", "milk", ""),
    ("A pinch of saffron threads", 1.0, "pinch", "saffron thread", ""),
    ("Fresh basil leaves, torn", None, "", "basil leaf", "fresh torn"),
    ("1/4 teaspoon ground cinnamon", 0.25, "teaspoon", "cinnamon", "ground"),
    ("2 cups cooked rice", 2.0, "cup", "rice", "cooked"),
    ("one onion", 1.0, "", "onion", ""),
    ("1 lb boneless skinless chicken thighs", 1.0, "pound", "chicken thigh", "boneless skinless"),
    ("6 cups chicken stock", 6.0, "cup", "chicken stock", ""),
    ("Olive oil, for frying", None, "", "olive oil", ""),
    ("2 to 3 cloves garlic, minced", 2.0, "clove", "garlic", "minced"),
    ("1 small red onion, thinly sliced", 1.0, "", "red onion", "small sliced"),
    ("200 g (7 oz) spinach", 200.0, "gram", "spinach", ""),
    ("1 tsp. sea salt", 1.0, "teaspoon", "sea salt", ""),
    ("½ cup heavy cream (optional)", 0.5, "cup", "heavy cream", ""),
    ("4 ripe tomatoes, cored and chopped", 4.0, "", "tomato", "ripe cored chopped"),
]

HAND_INSTRUCTIONS = [
    ("Preheat the oven to 180C.", [], "heat", "oven", [], None),
    ("Meanwhile, bring a large pot of salted water to a boil.", [], "boil", "pot", [], None),
    ("Season to taste and serve with crusty bread.", [], "season", "", [], None),
    ("Let the dough rest for 1 hour in the fridge.", ["flour"], "cool", "", [], 60.0),
    ("Using a slotted spoon, transfer the shrimp to a plate.", ["shrimp"], "unknown", "", ["shrimp"], None),
    ("Whisk together the eggs and milk until smooth.", ["egg", "milk"], "mix", "", ["egg", "milk"], None),
    ("Cook the rice according to the package instructions.", ["rice"], "cook", "", ["rice"], None),
    ("Roast the peppers under a hot grill for 10-15 minutes, turning often.", ["bell pepper"], "bake", "grill",
     ["bell pepper"], 15.0),
    ("Stir in the spinach and let it wilt, about 2 minutes.", ["spinach"], "mix", "", ["spinach"], 2.0),
    ("Fold the cheese into the sauce.", ["cheese"], "mix", "", ["cheese"], None),
]


def eval_ingredient_lines(count):
    out = []
    while len(out) < count:
        name = rng.choice(EVAL_NAMES)
        unit = rng.choice(list(UNIT_FORMS) + [""] * 4)
        qty_text, qty = rng.choice(QTY_FORMS)
        lead = rng.choice(LEAD_STATES)
        trail = rng.choice(TRAIL_STATES)
        words = [qty_text]
        if unit:
            words.append(rng.choice(UNIT_FORMS[unit]))
        if lead:
            words.append(lead)
        noun = EVAL_PLURAL.get(name, name) if (not unit and qty > 1) else name
        words.append(noun)
        line = " ".join(words)
        if trail:
            line += ", " + trail
        if rng.random() < 0.1:
            line += " (optional)"
        if rng.random() < 0.3:
            line = line[0].upper() + line[1:]
        states = [s for s in [lead] if s] + [s for s in trail.replace(" and ", " ").split() if s and not s.endswith("ly")]
        out.append({"text": line, "quantity": qty, "unit": unit, "name": name, "state": " ".join(states)})
    return out


INSTR_TEMPLATES = [
    ("Chop the {a} and {b}.", "cut", "", 2, None),
    ("Dice the {a} into small cubes.", "cut", "", 1, None),
    ("Fry the {a} in a large skillet for {d} minutes.", "fry", "pan", 1, "d"),
    ("Saute the {a} and {b} in the pan until soft, about {d} minutes.", "fry", "pan", 2, "d"),
    ("Simmer the {a} for {d} minutes.", "simmer", "", 1, "d"),
    ("Bake in the oven for {d} minutes until golden.", "bake", "oven", 0, "d"),
    ("Whisk the {a} and {b} in a mixing bowl.", "mix", "bowl", 2, None),
    ("Add the {a} to the pot and stir well.", "add", "pot", 1, None),
    ("Boil the {a} in a saucepan for {d} minutes.", "boil", "saucepan", 1, "d"),
    ("Blend the {a} in a blender until smooth.", "blend", "blender", 1, None),
    ("Sprinkle the {a} over the {b}.", "sprinkle", "", 2, None),
    ("Slice the {a} thinly with a knife.", "cut", "knife", 1, None),
    ("Pour the {a} into a baking dish.", "add", "baking dish", 1, None),
    ("Let cool on a wire rack for {d} minutes.", "cool", "rack", 0, "d"),
    ("Roast the {a} for {h} hour.", "bake", "", 1, "h"),
    ("Toss the {a} with the {b} in a large bowl.", "toss", "bowl", 2, None),
]
INSTR_NAMES = ["onion", "garlic", "carrot", "potato", "tomato", "mushroom", "spinach", "chicken", "shrimp", "rice",
               "cheese", "butter", "olive oil", "bell pepper", "apple", "egg", "cream", "stock"]


def eval_instructions(count):
    out = []
    while len(out) < count:
        tmpl, action, tool, n, dkind = rng.choice(INSTR_TEMPLATES)
        a, b = rng.sample(INSTR_NAMES, 2)
        d = rng.choice([3, 5, 8, 10, 15, 20, 25])
        text = tmpl.format(a=a, b=b, d=d, h=1)
        mentions = [a, b][:n]
        known = sorted(set(mentions + rng.sample(INSTR_NAMES, 3)))
        duration = None if dkind is None else (60.0 if dkind == "h" else float(d))
        out.append({"text": text, "known": known, "action": action, "tool": tool, "ingredients": mentions,
                    "duration": duration})
    return out


def write_eval():
    ing = [{"text": t, "quantity": q, "unit": u, "name": n, "state": s} for t, q, u, n, s in HAND_INGREDIENTS]
    ing += eval_ingredient_lines(100 - len(ing))
    ins = [{"text": t, "known": k, "action": a, "tool": tool, "ingredients": m, "duration": d}
           for t, k, a, tool, m, d in HAND_INSTRUCTIONS]
    ins += eval_instructions(50 - len(ins))
    (HERE / "eval").mkdir(exist_ok=True)
    with open(HERE / "eval" / "ingredient_lines.jsonl", "w") as f:
        for row in ing:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
    with open(HERE / "eval" / "instructions.jsonl", "w") as f:
        for row in ins:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


QUICHE_DOCUMENT = {
    "id": "d01", "title": "Spinach and mushroom quiche", "dish_type": "quiche", "cuisine": "french",
    "ingredient_lines": ["1 1/2 cups flour", "6 tablespoons butter, softened", "1 onion, chopped",
                         "2 cups fresh spinach", "200 g mushrooms, sliced", "3 large eggs",
                         "1 cup milk", "1 cup grated cheese", "Salt to taste"],
    "instruction_lines": ["Cut the onion, spinach and mushrooms.",
                          "Fry the onion in the butter for 5 minutes.",
                          "Mix the eggs, milk, cheese and salt in a bowl.",
                          "Roll the flour into a crust with a rolling pin.",
                          "Sprinkle the onion over the flour crust.",
                          "Assemble the quiche by pouring the eggs over the onion.",
                          "Bake in the oven for 35 minutes.",
                          "Cool on a wire rack for 10 minutes."],
}


def write_parse_corpus():
    docs = [QUICHE_DOCUMENT]
    dishes = list(DISHES)
    while len(docs) < 20:
        dish = dishes[len(docs) % len(dishes)]
        cuisine = rng.choice(DISH_CUISINES[dish])
        ids, steps = compose(dish, cuisine)
        lines = []
        for ing in ids:
            base, unit = BASE_QTY[ing]
            lines.append(raw_line(ing, nice(base * rng.choice([0.5, 1, 1.5])), unit))
        docs.append({"id": f"d{len(docs) + 1:02d}", "title": f"{CUISINE_NAMES[cuisine]} {dish.replace('_', ' ')}",
                     "dish_type": dish, "cuisine": cuisine, "ingredient_lines": lines,
                     "instruction_lines": steps})
    with open(HERE / "parse_corpus.jsonl", "w") as f:
        for d in docs:
            f.write(json.dumps(d, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    write_eval()
    write_parse_corpus()
