// Question bank shown by the registration picker. Mirrors the server's
// bank file (src/qa_auth/data/question_bank_v1.json); keep the two in
// sync when the bank changes — the service validates against its copy.

export interface BankQuestion {
  id: string;
  text: string;
  answerHint?: string;
}

export const BANK_VERSION = 1;

export const QUESTIONS: BankQuestion[] = [
  { id: "childhood-teacher", text: "What is the name of your favorite childhood teacher?", answerHint: "a person's name" },
  { id: "parents-met-city", text: "In what city or town did your father and mother meet?", answerHint: "city or town name" },
  { id: "first-pet", text: "What was the name of your first pet?", answerHint: "a pet's name" },
  { id: "mother-born-city", text: "In what city or town was your mother born?", answerHint: "city or town name" },
  { id: "father-born-city", text: "In what city or town was your father born?", answerHint: "city or town name" },
  { id: "childhood-best-friend", text: "What was the first name of your childhood best friend?", answerHint: "a person's first name" },
  { id: "childhood-street", text: "What was the name of the street you grew up on?", answerHint: "street name, without the number" },
  { id: "first-school", text: "What was the name of your first school?", answerHint: "school name" },
  { id: "oldest-cousin", text: "What is the first name of your oldest cousin?", answerHint: "a person's first name" },
  { id: "first-job-city", text: "In what city or town was your first job?", answerHint: "city or town name" },
  { id: "maternal-grandmother", text: "What is the first name of your maternal grandmother?", answerHint: "a person's first name" },
  { id: "first-boss", text: "What was the first name of your first boss?", answerHint: "a person's first name" },
  { id: "favorite-vacation-city", text: "In what city or town did you spend your favorite childhood vacation?", answerHint: "city or town name" },
  { id: "favorite-toy", text: "What was the name of your favorite stuffed animal or toy?", answerHint: "a toy's name" },
  { id: "oldest-sibling-middle", text: "What is the middle name of your oldest sibling?", answerHint: "a person's middle name" },
  { id: "high-school-mascot", text: "What was the mascot of your high school?", answerHint: "mascot name" },
  { id: "birth-hospital", text: "What is the name of the hospital where you were born?", answerHint: "hospital name" },
  { id: "first-concert", text: "Who performed at the first concert you attended?", answerHint: "artist or band name" },
  { id: "childhood-hero", text: "What is the name of your childhood hero?", answerHint: "a person's or character's name" },
  { id: "first-employer", text: "What was the name of the company where you had your first job?", answerHint: "company name" },
];
