/** Minimal strict CSV reader for the runner's LF-terminated output files. */

function splitLine(line: string): string[] {
  const fields: string[] = [];
  let current = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          current += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        current += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      fields.push(current);
      current = "";
    } else {
      current += ch;
    }
  }
  if (quoted) {
    throw new Error("unterminated quoted field");
  }
  fields.push(current);
  return fields;
}

export function parseCsv(text: string): { header: string[]; rows: string[][] } {
  const lines = text.split("\n");
  while (lines.length && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  const header = splitLine(lines[0]);
  const rows = lines.slice(1).map((line, index) => {
    const fields = splitLine(line);
    if (fields.length !== header.length) {
      throw new Error(
        `row ${index + 1} has ${fields.length} fields, header has ${header.length}`,
      );
    }
    return fields;
  });
  return { header, rows };
}

export function writeCsv(header: string[], rows: (string | number)[][]): string {
  const escape = (value: string | number): string => {
    const text = String(value);
    return /[",\n]/.test(text) ? `"${text.replace(/"/g, '""')}"` : text;
  };
  const lines = [header.join(",")];
  for (const row of rows) {
    lines.push(row.map(escape).join(","));
  }
  return lines.join("\n") + "\n";
}
