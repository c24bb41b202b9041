"""Writes the fictional toy corpus (speeches.jsonl). Speakers and speeches are invented."""
import json

S = []


def speech(sid, term, date, first, last, group, sentences):
    S.append(dict(speech_id=sid, term=term, date=date, speaker_first=first,
                  speaker_last=last, group=group, text=" ".join(sentences)))


speech("t18-001", 18, "2015-03-12", "Karla", "Brenner", "AfD", [
    "Herr Präsident! Meine sehr geehrten Damen und Herren!",
    "Die Regierung hat das Vertrauen der Bürger längst verspielt.",
    "Die Altparteien haben sich diesen Staat zur Beute gemacht.",
    "Das Volk will endlich wieder gehört werden.",
    "Wir sprechen aus, was die Menschen draußen im Land denken.",
    "Die Regierung lässt die Grenzen offen, und das Volk zahlt die Zeche.",
    "Die Altparteien verraten unsere Heimat.",
    "Vielen Dank.",
])
speech("t18-002", 18, "2015-03-12", "Sabine", "Hollmann", "CDU/CSU", [
    "Sehr geehrter Herr Präsident! Liebe Kolleginnen und Kollegen!",
    "Der Entwurf zur Reform der Pflegeversicherung liegt Ihnen vor.",
    "Wir haben im Ausschuss intensiv über die Details beraten.",
    "Die Beiträge steigen zum 1. Januar um 0,2 Prozentpunkte.",
    "Damit sichern wir die Finanzierung bis zum Jahr 2020.",
    "Ich bitte um Zustimmung zu diesem Gesetzentwurf.",
])
speech("t18-003", 18, "2015-06-18", "Jonas", "Wiedemann", "DIE LINKE", [
    "Frau Präsidentin! Meine Damen und Herren!",
    "Die Konzerne diktieren dieser Regierung die Gesetze.",
    "Während die Banken gerettet wurden, blieben die Rentnerinnen und Rentner allein.",
    "Die Menschen in diesem Land haben etwas Besseres verdient.",
    "Wir brauchen eine Vermögensteuer für Millionäre.",
    "Die Reichen müssen endlich ihren gerechten Anteil zahlen.",
    "Die Lobbyisten gehen in den Ministerien ein und aus.",
    "Danke schön.",
])
speech("t18-004", 18, "2015-06-18", "Thomas", "Ebeling", "SPD", [
    "Herr Präsident! Sehr geehrte Damen und Herren!",
    "Der Mindestlohn hat sich bewährt.",
    "Über 3 Mio. Beschäftigte profitieren davon.",
    "Die Zahl der sozialversicherungspflichtigen Jobs ist gestiegen.",
    "Wir werden die Ergebnisse der Kommission sorgfältig prüfen.",
    "Vielen Dank für die Aufmerksamkeit.",
])
speech("t18-005", 18, "2016-01-28", "Miriam", "Castell", "BÜNDNIS 90/DIE GRÜNEN", [
    "Herr Präsident! Liebe Kolleginnen und Kollegen!",
    "Der Klimaschutzplan ist ein wichtiger Schritt.",
    "Wir müssen den Ausbau der erneuerbaren Energien beschleunigen.",
    "Die Kohlekommission sollte bis Ende des Jahres Ergebnisse vorlegen.",
    "Dazu gehört auch ein sozial gerechter Strukturwandel in den Regionen.",
    "Ich danke Ihnen.",
])
speech("t18-006", 18, "2016-01-28", "Felix", "Aumann", "FDP", [
    "Frau Präsidentin! Meine Damen und Herren!",
    "Die Digitalisierung der Verwaltung kommt zu langsam voran.",
    "Bürgerinnen und Bürger warten wochenlang auf einfache Bescheide.",
    "Wir schlagen ein zentrales Bürgerportal vor.",
    "Die Kosten dafür liegen bei ca. 40 Mio. Euro.",
    "Vielen Dank.",
])
speech("t19-001", 19, "2018-02-22", "Karla", "Brenner", "AfD", [
    "Herr Präsident! Meine Damen und Herren!",
    "Diese Regierung regiert am Volk vorbei.",
    "Die Eliten in Berlin haben jeden Bezug zur Wirklichkeit verloren.",
    "Der Bürger zahlt, und die Regierung verteilt das Geld in alle Welt.",
    "Wir holen uns unser Land zurück.",
    "Die Regierung verordnet den Bürgern die Masseneinwanderung.",
    "Die Menschen haben genug von dieser Politik.",
    "Das Volk ist der Souverän, nicht die Regierung.",
])
speech("t19-002", 19, "2018-02-22", "Gerd", "Falkner", "AfD", [
    "Frau Präsidentin! Werte Kollegen!",
    "Die Medien verschweigen, was auf unseren Straßen passiert.",
    "Das Kartell der Altparteien hält zusammen, wenn es um die eigenen Pfründe geht.",
    "Die einfachen Leute werden im Stich gelassen.",
    "Die Medien verachten unsere Kultur.",
    "Wer kein Bleiberecht hat, muss das Land verlassen.",
    "Vielen Dank.",
])
speech("t19-003", 19, "2018-05-17", "Jonas", "Wiedemann", "DIE LINKE", [
    "Herr Präsident! Meine Damen und Herren!",
    "Die Regierung macht Politik für die oberen Zehntausend.",
    "Die Mieten explodieren, und die Immobilienkonzerne kassieren ab.",
    "Die Menschen wollen bezahlbaren Wohnraum.",
    "Wir fordern einen bundesweiten Mietendeckel.",
    "Die Profite der Aktionäre dürfen nicht über dem Gemeinwohl stehen.",
    "Das ist eine Frage der Gerechtigkeit.",
    "Danke.",
])
speech("t19-004", 19, "2018-05-17", "Petra", "Lorenz", "DIE LINKE", [
    "Frau Präsidentin! Liebe Kolleginnen und Kollegen!",
    "Die Rüstungskonzerne verdienen an jedem Krieg.",
    "Die Beschäftigten in der Pflege arbeiten am Limit.",
    "Wir stehen an der Seite der Menschen, die den Laden am Laufen halten.",
    "Die Regierung hat die Beschäftigten jahrelang vergessen.",
    "Vielen Dank.",
])
speech("t19-005", 19, "2018-09-13", "Sabine", "Hollmann", "CDU/CSU", [
    "Herr Präsident! Meine sehr verehrten Damen und Herren!",
    "Der Haushalt 2019 ist solide finanziert.",
    "Wir investieren 37,9 Mrd. Euro in Bildung und Forschung.",
    "Die schwarze Null bleibt erhalten.",
    "Gleichzeitig entlasten wir Familien mit Kindern, z. B. durch ein höheres Kindergeld.",
    "Ich bitte Sie um Unterstützung.",
])
speech("t19-006", 19, "2018-09-13", "Thomas", "Ebeling", "SPD", [
    "Frau Präsidentin! Sehr geehrte Kolleginnen und Kollegen!",
    "Mit der Grundrente würdigen wir die Lebensleistung vieler Menschen.",
    "Wer 35 Jahre gearbeitet hat, soll mehr haben als die Grundsicherung.",
    "Die Finanzierung ist im Haushalt vorgesehen.",
    "Wir werden das Gesetz noch in diesem Jahr verabschieden.",
    "Herzlichen Dank.",
])
speech("t19-007", 19, "2019-01-31", "Miriam", "Castell", "BÜNDNIS 90/DIE GRÜNEN", [
    "Herr Präsident! Liebe Kolleginnen und Kollegen!",
    "Das Artensterben ist eine der großen Krisen unserer Zeit.",
    "Wir brauchen verbindliche Ziele für den Schutz der Insekten.",
    "Die Landwirtschaft muss dabei unterstützt werden.",
    "Ein Aktionsprogramm mit klaren Fristen wäre ein Anfang.",
    "Vielen Dank.",
])
speech("t19-008", 19, "2019-01-31", "Felix", "Aumann", "FDP", [
    "Frau Präsidentin! Meine Damen und Herren!",
    "Der Solidaritätszuschlag gehört vollständig abgeschafft.",
    "Das Bundesverfassungsgericht hat hier klare Hinweise gegeben.",
    "Wir haben dazu einen Antrag vorgelegt, vgl. Drucksache 19/1038.",
    "Die Entlastung käme Handwerk und Mittelstand zugute.",
    "Ich danke Ihnen.",
])
speech("t19-009", 19, "2019-06-27", "Rudolf", "Kessler", "Fraktionslos", [
    "Herr Präsident! Meine Damen und Herren!",
    "Diese Regierung hat den Kontakt zu den Bürgern verloren.",
    "Die Menschen auf dem Land fühlen sich abgehängt.",
    "In Brüssel werden Entscheidungen über unsere Köpfe hinweg getroffen.",
    "Ich werde diesem Antrag nicht zustimmen.",
    "Danke.",
])
speech("t19-010", 19, "2019-06-27", "Gerd", "Falkner", "AfD", [
    "Herr Präsident!",
    "Die Regierung lügt den Bürgern ins Gesicht.",
    "Das Volk wird von einer abgehobenen Elite bevormundet.",
    "Die Grenzöffnung der Regierung war ein Rechtsbruch am eigenen Volk.",
    "Deutschland muss wieder den Deutschen gehören.",
    "Vielen Dank.",
])
speech("t19-011", 19, "2019-06-27", "Hanna", "Seidel", "SPD", [
    "Frau Präsidentin!",
    "Ja.",
    "Danke.",
])

with open("speeches.jsonl", "w", encoding="utf-8") as f:
    for s in S:
        f.write(json.dumps(s, ensure_ascii=False) + "\n")
